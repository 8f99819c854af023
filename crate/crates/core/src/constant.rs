//! Exact closed-form constants: rational combinations of π^k, log 2 and log(π/2).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Serialize, Serializer};

use crate::approx::Approx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogFactor {
    One,
    Ln2,
    LnHalfPi,
}

/// `Σ q · π^k · L` with rational `q`, integer `k` and `L` one of 1, log 2, log(π/2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Constant {
    terms: BTreeMap<(LogFactor, i32), Rational>,
}

impl Constant {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(q: impl Into<Rational>, pi_pow: i32, log: LogFactor) -> Self {
        let mut c = Self::zero();
        c.push(q.into(), pi_pow, log);
        c
    }

    pub fn q(q: impl Into<Rational>) -> Self {
        Self::term(q, 0, LogFactor::One)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::q(Rational::from((n, d)))
    }

    /// `q·π`
    pub fn pi(q: impl Into<Rational>) -> Self {
        Self::term(q, 1, LogFactor::One)
    }

    /// `q/π`
    pub fn inv_pi(q: impl Into<Rational>) -> Self {
        Self::term(q, -1, LogFactor::One)
    }

    pub fn ln2() -> Self {
        Self::term(1, 0, LogFactor::Ln2)
    }

    pub fn ln_half_pi() -> Self {
        Self::term(1, 0, LogFactor::LnHalfPi)
    }

    fn push(&mut self, q: Rational, k: i32, l: LogFactor) {
        let key = (l, k);
        let sum = match self.terms.remove(&key) {
            Some(old) => old + q,
            None => q,
        };
        if sum != 0 {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when the constant is purely rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::new()),
            1 => self.terms.get(&(LogFactor::One, 0)).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        let mut c = Self::zero();
        for ((l, k), v) in &self.terms {
            c.push(Rational::from(v * q), *k, *l);
        }
        c
    }

    pub fn mul_pi_pow(&self, j: i32) -> Self {
        let mut c = Self::zero();
        for ((l, k), v) in &self.terms {
            c.push(v.clone(), k + j, *l);
        }
        c
    }

    pub fn eval(&self, prec: u32) -> Approx {
        let mut acc = Approx::zero(prec);
        let pi = Approx::pi(prec);
        for ((l, k), q) in &self.terms {
            let mut t = Approx::rational(q, prec);
            let pk = pi.powi(k.unsigned_abs());
            t = if *k >= 0 { &t * &pk } else { &t / &pk };
            t = match l {
                LogFactor::One => t,
                LogFactor::Ln2 => &t * &Approx::ln2(prec),
                LogFactor::LnHalfPi => &t * &pi.mul_2exp(-1).ln(),
            };
            acc = &acc + &t;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.eval(128).to_f64()
    }

    fn fmt_term(q: &Rational, k: i32, l: LogFactor) -> String {
        let n = q.numer().clone().abs();
        let d = q.denom().clone();
        let log = match l {
            LogFactor::One => "",
            LogFactor::Ln2 => "log(2)",
            LogFactor::LnHalfPi => "log(π/2)",
        };
        let pi_up = match k {
            1 => "π".to_string(),
            k if k > 1 => format!("π^{k}"),
            _ => String::new(),
        };
        let pi_down = match k {
            -1 => "π".to_string(),
            k if k < -1 => format!("π^{}", -k),
            _ => String::new(),
        };
        let mut top = String::new();
        if n != 1 || (pi_up.is_empty() && log.is_empty()) {
            top.push_str(&n.to_string());
        }
        top.push_str(&pi_up);
        if !log.is_empty() {
            if !top.is_empty() {
                top.push('·');
            }
            top.push_str(log);
        }
        let bottom = match (d == 1, pi_down.is_empty()) {
            (true, true) => String::new(),
            (true, false) => pi_down,
            (false, true) => d.to_string(),
            (false, false) => format!("({d}{pi_down})"),
        };
        if bottom.is_empty() {
            top
        } else {
            format!("{top}/{bottom}")
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by_key(|&(l, k)| (l != LogFactor::One || k != 0, l, k));
        for (i, key) in keys.iter().enumerate() {
            let q = &self.terms[key];
            let neg = q.cmp0() == std::cmp::Ordering::Less;
            let body = Self::fmt_term(q, key.1, key.0);
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Constant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &Constant {
    type Output = Constant;
    fn add(self, o: &Constant) -> Constant {
        let mut c = self.clone();
        for ((l, k), q) in &o.terms {
            c.push(q.clone(), *k, *l);
        }
        c
    }
}

impl Neg for &Constant {
    type Output = Constant;
    fn neg(self) -> Constant {
        self.scale(&Rational::from(-1))
    }
}

impl Sub for &Constant {
    type Output = Constant;
    fn sub(self, o: &Constant) -> Constant {
        self + &(-o)
    }
}

/// Product, defined when at most one factor carries a logarithm.
impl Mul for &Constant {
    type Output = Option<Constant>;
    fn mul(self, o: &Constant) -> Option<Constant> {
        let mut c = Constant::zero();
        for ((l1, k1), q1) in &self.terms {
            for ((l2, k2), q2) in &o.terms {
                let l = match (l1, l2) {
                    (LogFactor::One, l) | (l, LogFactor::One) => *l,
                    _ => return None,
                };
                c.push(Rational::from(q1 * q2), k1 + k2, l);
            }
        }
        Some(c)
    }
}

impl From<Rational> for Constant {
    fn from(q: Rational) -> Self {
        Constant::q(q)
    }
}

/// One end of a claimed range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Finite(Constant),
    PosInf,
    NegInf,
}

impl Endpoint {
    pub fn finite(&self) -> Option<&Constant> {
        match self {
            Endpoint::Finite(c) => Some(c),
            _ => None,
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Finite(c) => write!(f, "{c}"),
            Endpoint::PosInf => write!(f, "inf"),
            Endpoint::NegInf => write!(f, "-inf"),
        }
    }
}

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(
            Constant::pi(Rational::from((871, 96768))).to_string(),
            "871π/96768"
        );
        let h3_hi = &Constant::ratio(3, 4) - &Constant::inv_pi(2);
        assert_eq!(h3_hi.to_string(), "3/4 - 2/π");
        let h4_hi = &Constant::pi(Rational::from((2549, 5760))) - &Constant::q(1);
        assert_eq!(h4_hi.to_string(), "-1 + 2549π/5760");
        assert_eq!(
            Constant::inv_pi(Rational::from((8, 3))).to_string(),
            "8/(3π)"
        );
        assert_eq!(
            Constant::term(2, -1, LogFactor::Ln2).to_string(),
            "2·log(2)/π"
        );
        assert_eq!(Constant::ln_half_pi().to_string(), "log(π/2)");
    }

    #[test]
    fn arithmetic_cancels_exactly() {
        let a = &Constant::ratio(3, 4) - &Constant::inv_pi(2);
        let b = &a - &Constant::ratio(3, 4);
        assert_eq!(b, Constant::inv_pi(-2));
        assert!((&b + &Constant::inv_pi(2)).is_zero());
        let half_pi = Constant::pi(Rational::from((1, 2)));
        let p = (&Constant::inv_pi(Rational::from((871, 48384))) * &half_pi).unwrap();
        assert_eq!(p, Constant::ratio(871, 96768));
    }

    #[test]
    fn evaluation() {
        let c = &Constant::ratio(3, 4) - &Constant::inv_pi(2);
        assert!((c.to_f64() - (0.75 - 2.0 / std::f64::consts::PI)).abs() < 1e-15);
        let l = Constant::ln_half_pi();
        assert!((l.to_f64() - (std::f64::consts::PI / 2.0).ln()).abs() < 1e-15);
        let v = Constant::term(2, -1, LogFactor::Ln2).eval(200);
        assert!(v.err().to_f64() < 1e-58);
    }
}
