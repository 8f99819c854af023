use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Uniform,
    GeometricTowardZero,
    GeometricTowardOne,
    /// A third of the points each: geometric toward 0, uniform, geometric toward 1.
    Composite,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub n_points: usize,
    pub lo: f64,
    pub hi: f64,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn new(n_points: usize, lo: f64, hi: f64, spacing: Spacing) -> Result<Self> {
        if !(lo > 0.0 && lo < hi && hi < 1.0) {
            return Err(Error::ParamOutOfRange(format!(
                "grid needs 0 < lo < hi < 1, got [{lo}, {hi}]"
            )));
        }
        if n_points < 16 {
            return Err(Error::ParamOutOfRange(format!(
                "grid needs at least 16 points, got {n_points}"
            )));
        }
        Ok(GridSpec {
            n_points,
            lo,
            hi,
            spacing,
        })
    }

    /// The default composite grid on `[1e-6, 1 - 1e-6]`.
    pub fn composite(n_points: usize) -> Result<Self> {
        Self::new(n_points, 1e-6, 1.0 - 1e-6, Spacing::Composite)
    }

    pub fn uniform(n_points: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(n_points, lo, hi, Spacing::Uniform)
    }

    /// Increasing points, exactly representable in 53 bits.
    pub fn points_f64(&self) -> Vec<f64> {
        let mut v = match self.spacing {
            Spacing::Uniform => uniform(self.n_points, self.lo, self.hi),
            Spacing::GeometricTowardZero => toward_zero(self.n_points, self.lo, self.hi),
            Spacing::GeometricTowardOne => toward_one(self.n_points, self.lo, self.hi),
            Spacing::Composite => {
                let (a, b) = if self.lo < 0.1 && self.hi > 0.9 {
                    (0.1, 0.9)
                } else {
                    let w = (self.hi - self.lo) / 3.0;
                    (self.lo + w, self.hi - w)
                };
                let third = self.n_points / 3;
                let mut v = toward_zero(third, self.lo, a);
                v.extend(uniform(third, a, b));
                v.extend(toward_one(self.n_points - 2 * third, b, self.hi));
                v
            }
        };
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        v
    }

    pub fn points(&self) -> Vec<Float> {
        self.points_f64()
            .into_iter()
            .map(|p| Float::with_val(53, p))
            .collect()
    }
}

fn frac(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

fn uniform(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * frac(i, n)).collect()
}

fn toward_zero(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    pinned(n, lo, hi, |t| (a + (b - a) * t).exp())
}

fn toward_one(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = ((1.0 - lo).ln(), (1.0 - hi).ln());
    pinned(n, lo, hi, |t| 1.0 - (a + (b - a) * t).exp())
}

/// `f` at fractions of the way along, with the ends exactly `lo` and `hi`.
fn pinned(n: usize, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i + 1 == n => hi,
            _ => f(frac(i, n)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_covers_both_ends() {
        let g = GridSpec::composite(10_000).unwrap();
        let p = g.points_f64();
        assert!(p.len() > 9_900 && p.len() <= 10_000);
        assert_eq!(p[0], 1e-6);
        assert!((p[p.len() - 1] - (1.0 - 1e-6)).abs() < 1e-15);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert!(p.iter().filter(|&&r| r < 1e-3).count() > 1000);
        assert!(p.iter().filter(|&&r| r > 1.0 - 1e-3).count() > 1000);
    }

    #[test]
    fn invalid_grids() {
        assert!(GridSpec::new(15, 0.1, 0.9, Spacing::Uniform).is_err());
        assert!(GridSpec::new(100, 0.0, 0.9, Spacing::Uniform).is_err());
        assert!(GridSpec::new(100, 0.5, 0.4, Spacing::Uniform).is_err());
        assert!(GridSpec::new(100, 0.1, 1.0, Spacing::Uniform).is_err());
    }
}
