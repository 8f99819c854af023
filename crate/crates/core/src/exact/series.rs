//! Truncated power series in `x` with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::fmt_rational;
use crate::error::{Error, Result};

/// `Σ_{n≤N} c_n xⁿ`, known exactly up to and including order `N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least a constant term"
        );
        PowerSeries { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self::new((0..=order).map(f).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::new())
    }

    pub fn constant(q: impl Into<Rational>, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = q.into();
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(1, order)
    }

    /// A polynomial given by its low coefficients, padded to `order`.
    pub fn poly(low: &[Rational], order: usize) -> Self {
        Self::from_fn(order, |n| low.get(n).cloned().unwrap_or_default())
    }

    /// Polynomial from `(numerator, denominator)` pairs.
    pub fn poly_q(low: &[(i64, i64)], order: usize) -> Self {
        let low: Vec<Rational> = low.iter().map(|&(n, d)| Rational::from((n, d))).collect();
        Self::poly(&low, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0().is_eq())
    }

    /// Number of leading zero coefficients.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.cmp0().is_eq()).count()
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * q)).collect())
    }

    pub fn scale_q(&self, n: i64, d: i64) -> Self {
        self.scale(&Rational::from((n, d)))
    }

    /// Division by `x^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() {
            return Err(Error::InvalidSeries(format!(
                "cannot divide an order-{} series by x^{k}",
                self.order()
            )));
        }
        if let Some(i) = (0..k).find(|&i| self.coeffs[i].cmp0().is_ne()) {
            return Err(Error::InvalidSeries(format!(
                "coefficient {i} is nonzero, cannot divide by x^{k}"
            )));
        }
        Ok(Self::new(self.coeffs[k..].to_vec()))
    }

    /// Multiplication by `x^k`; the order is unchanged.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        Self::from_fn(n, |i| {
            if i < k {
                Rational::new()
            } else {
                self.coeffs[i - k].clone()
            }
        })
    }

    /// The series in `t` obtained by substituting `x = t²`.
    pub fn even_substitute(&self) -> Self {
        let n = 2 * self.order() + 1;
        Self::from_fn(n, |i| {
            if i % 2 == 0 {
                self.coeffs[i / 2].clone()
            } else {
                Rational::new()
            }
        })
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::from_fn(self.order() - 1, |n| {
            Rational::from(&self.coeffs[n + 1] * (n as u64 + 1))
        })
    }

    /// Term-wise integral with zero constant term.
    pub fn integral(&self) -> Self {
        Self::from_fn(self.order() + 1, |n| {
            if n == 0 {
                Rational::new()
            } else {
                Rational::from(&self.coeffs[n - 1] / n as u64)
            }
        })
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Self::from_fn(n, |k| {
            let mut acc = Rational::new();
            for i in 0..=k {
                if self.coeffs[i].cmp0().is_ne() && o.coeffs[k - i].cmp0().is_ne() {
                    acc += Rational::from(&self.coeffs[i] * &o.coeffs[k - i]);
                }
            }
            acc
        })
    }

    /// `self / o`, requiring `o₀ ≠ 0`.
    pub fn div(&self, o: &Self) -> Result<Self> {
        let n = self.order().min(o.order());
        if o.coeffs[..=n].iter().all(|c| c.cmp0().is_eq()) {
            return Err(Error::DivisionByZeroSeries(n));
        }
        if o.coeffs[0].cmp0().is_eq() {
            return Err(Error::InvalidSeries(
                "divisor has a zero constant term; factor the common power of x first".into(),
            ));
        }
        let inv0 = Rational::from(o.coeffs[0].recip_ref());
        let mut w: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..=k {
                if o.coeffs[i].cmp0().is_ne() {
                    acc -= Rational::from(&o.coeffs[i] * &w[k - i]);
                }
            }
            w.push(acc * &inv0);
        }
        Ok(Self::new(w))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one(self.order()).div(self)
    }

    /// `log(self)`, requiring a unit constant term: the integral of `u'/u`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != 1 {
            return Err(Error::InvalidSeries("log needs constant term 1".into()));
        }
        if self.order() == 0 {
            return Ok(Self::zero(0));
        }
        Ok(self.derivative().div(self)?.integral())
    }

    /// `exp(self)`, requiring a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if self.coeffs[0].cmp0().is_ne() {
            return Err(Error::InvalidSeries("exp needs constant term 0".into()));
        }
        let n = self.order();
        let mut w: Vec<Rational> = vec![Rational::from(1)];
        for m in 1..=n {
            let mut acc = Rational::new();
            for k in 1..=m {
                if self.coeffs[k].cmp0().is_ne() {
                    acc += Rational::from(&self.coeffs[k] * &w[m - k]) * k as u64;
                }
            }
            w.push(acc / m as u64);
        }
        Ok(Self::new(w))
    }

    /// `self^q` for rational `q`, requiring a unit constant term.
    pub fn pow_q(&self, q: &Rational) -> Result<Self> {
        self.log()?.scale(q).exp()
    }

    /// Exact value of the truncated polynomial at a rational point.
    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        PowerSeries::from_fn(n, |k| Rational::from(&self.coeffs[k] + &o.coeffs[k]))
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        PowerSeries::from_fn(n, |k| Rational::from(&self.coeffs[k] - &o.coeffs[k]))
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, o: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, o)
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        let mut st = s.serialize_struct("PowerSeries", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Free-function forms of the kernel operations.
pub fn ps_mul(u: &PowerSeries, v: &PowerSeries) -> PowerSeries {
    u.mul(v)
}

pub fn ps_div(u: &PowerSeries, v: &PowerSeries) -> Result<PowerSeries> {
    u.div(v)
}

pub fn ps_log(u: &PowerSeries) -> Result<PowerSeries> {
    u.log()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn geometric(order: usize) -> PowerSeries {
        PowerSeries::from_fn(order, |_| Rational::from(1))
    }

    #[test]
    fn division_by_one_minus_x_gives_geometric() {
        let one_minus_x = PowerSeries::poly_q(&[(1, 1), (-1, 1)], 10);
        let g = PowerSeries::one(10).div(&one_minus_x).unwrap();
        assert_eq!(g, geometric(10));
    }

    #[test]
    fn division_errors() {
        let z = PowerSeries::zero(5);
        assert_eq!(geometric(5).div(&z), Err(Error::DivisionByZeroSeries(5)));
        let x = PowerSeries::poly_q(&[(0, 1), (1, 1)], 5);
        assert!(matches!(geometric(5).div(&x), Err(Error::InvalidSeries(_))));
    }

    #[test]
    fn log_of_geometric_is_harmonic() {
        // -log(1-x) = Σ xⁿ/n
        let l = geometric(12).log().unwrap();
        for n in 1..=12 {
            assert_eq!(l.coeff(n), &Rational::from((1, n as i64)));
        }
    }

    #[test]
    fn exp_inverts_log() {
        let u = PowerSeries::from_fn(15, |n| Rational::from((1, 2 * n as i64 + 1)));
        assert_eq!(u.log().unwrap().exp().unwrap(), u);
    }

    #[test]
    fn pow_half_squares_back() {
        let u = PowerSeries::poly_q(&[(1, 1), (-1, 1)], 20);
        let s = u.pow_q(&Rational::from((-1, 2))).unwrap();
        assert_eq!(s.coeff(2), &Rational::from((3, 8)));
        let back = s.mul(&s).mul(&u);
        assert_eq!(back, PowerSeries::one(20));
    }

    #[test]
    fn shifts() {
        let s = PowerSeries::poly_q(&[(0, 1), (0, 1), (3, 4)], 6);
        assert_eq!(s.valuation(), 2);
        let d = s.shift_down(2).unwrap();
        assert_eq!(d.order(), 4);
        assert_eq!(d.coeff(0), &Rational::from((3, 4)));
        assert!(s.shift_down(3).is_err());
        assert_eq!(d.shift_up(2).truncate(4), s.truncate(4));
        let e = PowerSeries::poly_q(&[(1, 1), (2, 1)], 2).even_substitute();
        assert_eq!(e.order(), 5);
        assert_eq!(e.coeff(2), &Rational::from(2));
        assert_eq!(e.coeff(1), &Rational::new());
    }

    #[test]
    fn serializes_with_denominators() {
        let s = PowerSeries::poly_q(&[(3, 1), (1, 2)], 1);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"order":1,"coeffs":["3/1","1/2"]}"#);
    }

    fn small_series(order: usize) -> impl Strategy<Value = PowerSeries> {
        proptest::collection::vec((-50i64..50, 1i64..20), order + 1).prop_map(|v| {
            PowerSeries::new(v.into_iter().map(|(n, d)| Rational::from((n, d))).collect())
        })
    }

    proptest! {
        #[test]
        fn mul_then_div_round_trips(u in small_series(8), mut v in small_series(8), c in 1i64..9) {
            v.coeffs[0] = Rational::from(c);
            let w = u.mul(&v).div(&v).unwrap();
            prop_assert_eq!(w, u);
        }

        #[test]
        fn mul_is_commutative(u in small_series(6), v in small_series(6)) {
            prop_assert_eq!(u.mul(&v), v.mul(&u));
        }

        #[test]
        fn log_of_product_is_sum(mut u in small_series(6), mut v in small_series(6)) {
            u.coeffs[0] = Rational::from(1);
            v.coeffs[0] = Rational::from(1);
            let lhs = u.mul(&v).log().unwrap();
            let rhs = &u.log().unwrap() + &v.log().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
