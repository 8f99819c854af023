//! Maclaurin series of the basic hypergeometric functions and of the
//! logarithmic combinations built from them.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rug::Rational;

use super::cached;
use super::sequences::a_table;
use super::series::PowerSeries;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Known {
    /// `2K/π = Σ a_n xⁿ`
    F0,
    /// `arth(r)/r = Σ xⁿ/(2n+1)`
    F1,
    LogF0,
    LogF1,
}

impl Known {
    pub fn name(self) -> &'static str {
        match self {
            Known::F0 => "F0",
            Known::F1 => "F1",
            Known::LogF0 => "logF0",
            Known::LogF1 => "logF1",
        }
    }
}

impl FromStr for Known {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Known::F0, Known::F1, Known::LogF0, Known::LogF1]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSeries(s.into()))
    }
}

/// Logarithm through `n fₙ = Σ_{k=1}^{n} k l_k f_{n-k}`, independent of [`PowerSeries::log`].
fn log_by_recurrence(f: &PowerSeries) -> PowerSeries {
    let n = f.order();
    let mut l: Vec<Rational> = vec![Rational::new()];
    for m in 1..=n {
        let mut acc = Rational::from(f.coeff(m) * m as u64);
        for k in 1..m {
            acc -= Rational::from(&l[k] * f.coeff(m - k)) * k as u64;
        }
        l.push(acc / m as u64);
    }
    PowerSeries::new(l)
}

fn build_known(name: Known, order: usize) -> Result<PowerSeries> {
    Ok(match name {
        Known::F0 => PowerSeries::new(a_table(order)),
        Known::F1 => PowerSeries::from_fn(order, |n| Rational::from((1, 2 * n as i64 + 1))),
        Known::LogF0 => log_by_recurrence(&ps_from_known(Known::F0, order)?),
        Known::LogF1 => log_by_recurrence(&ps_from_known(Known::F1, order)?),
    })
}

pub fn known_arc(name: Known, order: usize) -> Result<Arc<PowerSeries>> {
    cached(name.name(), order, || build_known(name, order))
}

pub fn ps_from_known(name: Known, order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(Error::ParamOutOfRange(
            "series order must be at least 1".into(),
        ));
    }
    Ok(known_arc(name, order)?.as_ref().clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedSeries {
    /// `f = (G - 3/4)/x`
    F,
    /// `G = log F0 / log F1`
    G,
    H11,
    H12,
    H13,
    F7,
}

impl NamedSeries {
    pub const ALL: [NamedSeries; 6] = [
        NamedSeries::F,
        NamedSeries::G,
        NamedSeries::H11,
        NamedSeries::H12,
        NamedSeries::H13,
        NamedSeries::F7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedSeries::F => "f",
            NamedSeries::G => "G",
            NamedSeries::H11 => "h11",
            NamedSeries::H12 => "h12",
            NamedSeries::H13 => "h13",
            NamedSeries::F7 => "f7",
        }
    }
}

impl fmt::Display for NamedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedSeries {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NamedSeries::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownSeries(s.into()))
    }
}

fn build_named(name: NamedSeries, order: usize) -> Result<PowerSeries> {
    let m = order + 3;
    let l0 = ps_from_known(Known::LogF0, m)?;
    let l1 = ps_from_known(Known::LogF1, m)?;
    let q = |n, d| Rational::from((n, d));
    let s = match name {
        NamedSeries::G => l0.shift_down(1)?.div(&l1.shift_down(1)?)?,
        NamedSeries::F => {
            let g = build_named(NamedSeries::G, order + 1)?;
            (&g - &PowerSeries::constant(q(3, 4), g.order())).shift_down(1)?
        }
        NamedSeries::H11 => {
            let lin = PowerSeries::poly_q(&[(3, 4), (1, 4)], m);
            (&lin.mul(&l1) - &l0).shift_down(2)?
        }
        NamedSeries::H12 => {
            let lin = PowerSeries::poly_q(&[(3, 4), (1, 320)], m);
            (&l0 - &lin.mul(&l1)).shift_down(3)?
        }
        NamedSeries::H13 => l0.shift_down(1)?,
        NamedSeries::F7 => l1.shift_down(1)?,
    };
    Ok(s.truncate(order))
}

/// The series of `name` derived from `log F0` and `log F1`, exact to `order`.
pub fn named_series(name: NamedSeries, order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(Error::ParamOutOfRange(
            "series order must be at least 1".into(),
        ));
    }
    Ok(
        cached(&format!("named:{name}"), order, || build_named(name, order))?
            .as_ref()
            .clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn log_leading_coefficients() {
        let l1 = ps_from_known(Known::LogF1, 4).unwrap();
        assert_eq!(l1.coeff(0), &Rational::new());
        assert_eq!(l1.coeff(1), &q(1, 3));
        assert_eq!(l1.coeff(2), &q(13, 90));
        let l0 = ps_from_known(Known::LogF0, 4).unwrap();
        assert_eq!(l0.coeff(1), &q(1, 4));
        assert_eq!(l0.coeff(2), &q(7, 64));
        assert_eq!(ps_from_known(Known::F1, 3).unwrap().coeff(3), &q(1, 7));
    }

    #[test]
    fn two_log_paths_agree() {
        for k in [Known::F0, Known::F1] {
            let f = ps_from_known(k, 20).unwrap();
            let via_div = f.log().unwrap();
            let lk = if k == Known::F0 {
                Known::LogF0
            } else {
                Known::LogF1
            };
            assert_eq!(via_div, ps_from_known(lk, 20).unwrap());
        }
    }

    #[test]
    fn product_quotient_round_trip() {
        let f0 = ps_from_known(Known::F0, 20).unwrap();
        let f1 = ps_from_known(Known::F1, 20).unwrap();
        assert_eq!(f0.mul(&f1).div(&f1).unwrap(), f0);
        assert_eq!(f0.mul(&PowerSeries::one(20)), f0);
    }

    #[test]
    fn order_zero_rejected() {
        assert!(ps_from_known(Known::F0, 0).is_err());
        assert!(named_series(NamedSeries::F, 0).is_err());
    }

    #[test]
    fn identity_between_f_and_g() {
        let g = named_series(NamedSeries::G, 12).unwrap();
        let f = named_series(NamedSeries::F, 11).unwrap();
        assert_eq!(g.coeff(0), &q(3, 4));
        for n in 0..=11 {
            assert_eq!(g.coeff(n + 1), f.coeff(n));
        }
    }

    #[test]
    fn cache_returns_consistent_truncations() {
        let big = named_series(NamedSeries::H11, 20).unwrap();
        let small = named_series(NamedSeries::H11, 5).unwrap();
        assert_eq!(big.truncate(5), small);
    }
}
