//! Multiprecision values carrying a running error bound.
//!
//! Every operation adds a four-ulp rounding allowance at the working precision
//! and propagates the error of its operands to first order plus the quadratic
//! cross term. This is a heuristic enclosure, not interval arithmetic: callers
//! re-check decisions at escalated precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Precision of the error component.
pub const ERR_PREC: u32 = 53;

macro_rules! up {
    ($e:expr) => {
        Float::with_val_round(ERR_PREC, $e, Round::Up).0
    };
}

fn mag(v: &Float) -> Float {
    up!(v.abs_ref())
}

fn slack(v: &Float) -> Float {
    let mut s = mag(v);
    s >>= v.prec() as i32 - 2;
    s
}

fn zero_err() -> Float {
    Float::new(ERR_PREC)
}

fn inf_err() -> Float {
    Float::with_val(ERR_PREC, rug::float::Special::Infinity)
}

/// A value at working precision together with a bound on its absolute error.
#[derive(Clone, Debug)]
pub struct Approx {
    v: Float,
    e: Float,
}

impl Approx {
    pub fn exact(v: Float) -> Self {
        Approx { v, e: zero_err() }
    }

    pub fn with_err(v: Float, e: Float) -> Self {
        let e = up!(e.abs_ref());
        Approx { v, e }
    }

    /// A freshly rounded value: error is one rounding allowance.
    pub fn rounded(v: Float) -> Self {
        let e = slack(&v);
        Approx { v, e }
    }

    pub fn int(i: i64, prec: u32) -> Self {
        let v = Float::with_val(prec, i);
        if v == i {
            Self::exact(v)
        } else {
            Self::rounded(v)
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::int(1, prec)
    }

    pub fn rational(q: &Rational, prec: u32) -> Self {
        let v = Float::with_val(prec, q);
        if q.denom() == &1u32 && v == *q.numer() {
            Self::exact(v)
        } else {
            Self::rounded(v)
        }
    }

    pub fn pi(prec: u32) -> Self {
        Self::rounded(Float::with_val(prec, Constant::Pi))
    }

    pub fn ln2(prec: u32) -> Self {
        Self::rounded(Float::with_val(prec, Constant::Log2))
    }

    pub fn value(&self) -> &Float {
        &self.v
    }

    pub fn err(&self) -> &Float {
        &self.e
    }

    pub fn prec(&self) -> u32 {
        self.v.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.e.is_finite()
    }

    /// Sign certified by the error bound, `None` if the value is within error of zero.
    pub fn sign(&self) -> Option<Ordering> {
        if !self.is_finite() {
            return None;
        }
        if mag(&self.v) > self.e {
            Some(if self.v.is_sign_negative() {
                Ordering::Less
            } else {
                Ordering::Greater
            })
        } else {
            None
        }
    }

    pub fn certainly_positive(&self) -> bool {
        self.sign() == Some(Ordering::Greater)
    }

    pub fn certainly_negative(&self) -> bool {
        self.sign() == Some(Ordering::Less)
    }

    /// `|v| - e`, the distance from zero that survives the error bound.
    pub fn slack_over_err(&self) -> Float {
        Float::with_val_round(ERR_PREC, mag(&self.v) - &self.e, Round::Down).0
    }

    /// Same value at a different working precision.
    pub fn set_prec(&self, prec: u32) -> Self {
        let v = Float::with_val(prec, &self.v);
        let extra = if v == self.v { zero_err() } else { slack(&v) };
        Approx {
            v,
            e: up!(&self.e + &extra),
        }
    }

    fn join_prec(&self, o: &Self) -> u32 {
        self.v.prec().max(o.v.prec())
    }

    fn finish(v: Float, e: Float) -> Self {
        if !v.is_finite() || e.is_nan() {
            return Approx { v, e: inf_err() };
        }
        let s = slack(&v);
        Approx { v, e: up!(&e + &s) }
    }

    pub fn abs(&self) -> Self {
        Approx {
            v: Float::with_val(self.prec(), self.v.abs_ref()),
            e: self.e.clone(),
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        &Approx::one(self.prec()) / self
    }

    /// Multiplication by 2^k, exact.
    pub fn mul_2exp(&self, k: i32) -> Self {
        let mut v = self.v.clone();
        let mut e = self.e.clone();
        v <<= k;
        e <<= k;
        Approx { v, e }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Approx::one(self.prec());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.v.is_sign_negative() && !self.v.is_zero() {
            return Approx {
                v: Float::with_val(p, rug::float::Special::Nan),
                e: inf_err(),
            };
        }
        let v = Float::with_val(p, self.v.sqrt_ref());
        let half = Float::with_val(ERR_PREC, &self.v / 2u32);
        let e = if self.e <= half && !v.is_zero() {
            // |sqrt(v+d) - sqrt(v)| <= |d| / sqrt(v - |d|) <= |d| sqrt(2) / sqrt(v)
            up!(&self.e / Float::with_val(ERR_PREC, half.sqrt_ref()))
        } else {
            let hi = up!(&self.v + &self.e);
            up!(hi.sqrt_ref())
        };
        Self::finish(v, e)
    }

    pub fn ln(&self) -> Self {
        let p = self.prec();
        let lo = Float::with_val_round(ERR_PREC, &self.v - &self.e, Round::Down).0;
        if lo <= 0 {
            let v = Float::with_val(p, self.v.ln_ref());
            return Approx { v, e: inf_err() };
        }
        let v = Float::with_val(p, self.v.ln_ref());
        let e = up!(&self.e / &lo);
        Self::finish(v, e)
    }

    /// `ln(1 + v)` without cancellation for small arguments.
    pub fn ln_1p(&self) -> Self {
        let p = self.prec();
        let lo = Float::with_val_round(ERR_PREC, &self.v - &self.e, Round::Down).0 + 1u32;
        let v = Float::with_val(p, self.v.ln_1p_ref());
        if lo <= 0 {
            return Approx { v, e: inf_err() };
        }
        let e = up!(&self.e / &lo);
        Self::finish(v, e)
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let v = Float::with_val(p, self.v.exp_ref());
        let grow = up!(self.e.exp_ref());
        let e = up!(up!(&mag(&v) * &self.e) * &grow);
        Self::finish(v, e)
    }

    /// `exp(v) - 1` without cancellation for small arguments.
    pub fn exp_m1(&self) -> Self {
        let p = self.prec();
        let v = Float::with_val(p, self.v.exp_m1_ref());
        let hi = up!(&mag(&self.v) + &self.e);
        let d = up!(hi.exp_ref());
        let e = up!(&d * &self.e);
        Self::finish(v, e)
    }

    /// `self^y = exp(y ln self)` for positive `self`.
    pub fn pow(&self, y: &Approx) -> Self {
        (y * &self.ln()).exp()
    }

    pub fn pow_q(&self, q: &Rational) -> Self {
        self.ln().mul_q(q).exp()
    }

    pub fn mul_q(&self, q: &Rational) -> Self {
        let p = self.prec();
        let v = Float::with_val(p, &self.v * q);
        let qa = Float::with_val_round(ERR_PREC, &Rational::from(q.abs_ref()), Round::Up).0;
        let e = up!(&self.e * &qa);
        Self::finish(v, e)
    }

    pub fn div_q(&self, q: &Rational) -> Self {
        self.mul_q(&Rational::from(q.recip_ref()))
    }

    pub fn add_q(&self, q: &Rational) -> Self {
        let v = Float::with_val(self.prec(), &self.v + q);
        Self::finish(v, self.e.clone())
    }

    pub fn max(&self, o: &Self) -> Self {
        if self.v >= o.v {
            Approx {
                v: self.v.clone(),
                e: self.e.clone().max(&o.e),
            }
        } else {
            Approx {
                v: o.v.clone(),
                e: o.e.clone().max(&self.e),
            }
        }
    }

    /// Rounds to `bits` and folds the rounding into the bound.
    pub fn to_result(&self, bits: u32, terms_used: usize) -> Result<EvalResult> {
        if !self.is_finite() {
            return Err(Error::PrecisionExhausted {
                bits,
                what: "error bound is not finite".into(),
            });
        }
        let value = Float::with_val(bits, &self.v);
        let diff = Float::with_val(self.prec().max(bits) + 2, &value - &self.v);
        let err_bound = up!(&self.e + &mag(&diff));
        Ok(EvalResult {
            value,
            err_bound,
            terms_used,
        })
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ± {}",
            self.v.to_string_radix(10, Some(20)),
            self.e.to_string_radix(10, Some(3))
        )
    }
}

impl<'a> Add<&'a Approx> for &'a Approx {
    type Output = Approx;
    fn add(self, o: &Approx) -> Approx {
        let v = Float::with_val(self.join_prec(o), &self.v + &o.v);
        Approx::finish(v, up!(&self.e + &o.e))
    }
}

impl<'a> Sub<&'a Approx> for &'a Approx {
    type Output = Approx;
    fn sub(self, o: &Approx) -> Approx {
        let v = Float::with_val(self.join_prec(o), &self.v - &o.v);
        Approx::finish(v, up!(&self.e + &o.e))
    }
}

impl<'a> Mul<&'a Approx> for &'a Approx {
    type Output = Approx;
    fn mul(self, o: &Approx) -> Approx {
        let v = Float::with_val(self.join_prec(o), &self.v * &o.v);
        let e1 = up!(&mag(&self.v) * &o.e);
        let e2 = up!(&mag(&o.v) * &self.e);
        let e3 = up!(&self.e * &o.e);
        Approx::finish(v, up!(up!(&e1 + &e2) + &e3))
    }
}

impl<'a> Div<&'a Approx> for &'a Approx {
    type Output = Approx;
    fn div(self, o: &Approx) -> Approx {
        let p = self.join_prec(o);
        let den = Float::with_val_round(ERR_PREC, mag(&o.v) - &o.e, Round::Down).0;
        let v = Float::with_val(p, &self.v / &o.v);
        if den <= 0 {
            return Approx { v, e: inf_err() };
        }
        let num = up!(&self.e + &up!(&mag(&v) * &o.e));
        Approx::finish(v, up!(&num / &den))
    }
}

impl Neg for &Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx {
            v: Float::with_val(self.prec(), -&self.v),
            e: self.e.clone(),
        }
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Approx> for Approx {
            type Output = Approx;
            fn $m(self, o: Approx) -> Approx {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Approx> for Approx {
            type Output = Approx;
            fn $m(self, o: &Approx) -> Approx {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Approx> for &'a Approx {
            type Output = Approx;
            fn $m(self, o: Approx) -> Approx {
                self.$m(&o)
            }
        }
        impl $tr<i64> for &Approx {
            type Output = Approx;
            fn $m(self, o: i64) -> Approx {
                self.$m(&Approx::int(o, self.prec()))
            }
        }
        impl $tr<i64> for Approx {
            type Output = Approx;
            fn $m(self, o: i64) -> Approx {
                (&self).$m(&Approx::int(o, self.prec()))
            }
        }
        impl $tr<&Approx> for i64 {
            type Output = Approx;
            fn $m(self, o: &Approx) -> Approx {
                (&Approx::int(self, o.prec())).$m(o)
            }
        }
        impl $tr<Approx> for i64 {
            type Output = Approx;
            fn $m(self, o: Approx) -> Approx {
                (&Approx::int(self, o.prec())).$m(&o)
            }
        }
        impl $tr<&Rational> for &Approx {
            type Output = Approx;
            fn $m(self, o: &Rational) -> Approx {
                self.$m(&Approx::rational(o, self.prec()))
            }
        }
        impl $tr<&Rational> for Approx {
            type Output = Approx;
            fn $m(self, o: &Rational) -> Approx {
                (&self).$m(&Approx::rational(o, self.prec()))
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

/// Public result of an evaluation at target precision.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub value: Float,
    pub err_bound: Float,
    pub terms_used: usize,
}

impl EvalResult {
    pub fn to_approx(&self) -> Approx {
        Approx::with_err(self.value.clone(), self.err_bound.clone())
    }

    pub fn value_string(&self) -> String {
        float_to_decimal(&self.value)
    }

    pub fn err_string(&self) -> String {
        self.err_bound.to_string_radix(10, Some(6))
    }
}

/// Decimal digits that faithfully represent `bits` binary digits.
pub fn decimal_digits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn float_to_decimal(v: &Float) -> String {
    v.to_string_radix(10, Some(decimal_digits(v.prec())))
}

/// Parses a decimal string exactly and rounds once to `bits`.
pub fn parse_decimal(s: &str, bits: u32) -> Result<Float> {
    let parsed = Float::parse(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
    Ok(Float::with_val(bits, parsed))
}

/// Parses `p/q`, an integer, or an exact decimal into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Ok(q) = t.parse::<Rational>() {
        return Ok(q);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match body.find(['e', 'E']) {
        Some(i) => (
            &body[..i],
            body[i + 1..]
                .parse::<i32>()
                .map_err(|_| Error::Parse(s.into()))?,
        ),
        None => (body, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() || !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(Error::Parse(s.into()));
    }
    let digits: rug::Integer = format!("{ip}{fp}")
        .parse()
        .map_err(|_| Error::Parse(s.into()))?;
    let scale = exp - fp.len() as i32;
    let mut q = Rational::from(digits);
    if scale >= 0 {
        q *= Rational::from(rug::Integer::from(rug::Integer::u_pow_u(10, scale as u32)));
    } else {
        q /= Rational::from(rug::Integer::from(rug::Integer::u_pow_u(
            10,
            (-scale) as u32,
        )));
    }
    if neg {
        q = -q;
    }
    Ok(q)
}
