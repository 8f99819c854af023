use serde::Serialize;

use crate::constant::{Constant, Endpoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotone {
    Increasing,
    Decreasing,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convexity {
    Convex,
    Concave,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Positive,
    Negative,
}

/// `f > threshold` (positive) or `f < threshold` (negative) on (0,1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrictSign {
    pub sign: Sign,
    pub threshold: Constant,
}

/// What is asserted about a function on (0,1).
///
/// `conjectural` marks the whole set as unproven. The `conjectured_*` fields
/// carry unproven additions to an otherwise proven set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimSet {
    pub monotone: Monotone,
    pub convexity: Convexity,
    pub range_lo: Option<Endpoint>,
    pub range_hi: Option<Endpoint>,
    pub strict_sign: Option<StrictSign>,
    /// All Maclaurin coefficients positive.
    pub absolutely_monotone: bool,
    pub conjectural: bool,
    pub conjectured_convexity: Convexity,
    pub conjectured_abs_monotone: bool,
}

impl ClaimSet {
    pub fn empty() -> Self {
        ClaimSet {
            monotone: Monotone::None,
            convexity: Convexity::None,
            range_lo: None,
            range_hi: None,
            strict_sign: None,
            absolutely_monotone: false,
            conjectural: false,
            conjectured_convexity: Convexity::None,
            conjectured_abs_monotone: false,
        }
    }

    pub fn monotone(m: Monotone, lo: Endpoint, hi: Endpoint) -> Self {
        ClaimSet {
            monotone: m,
            range_lo: Some(lo),
            range_hi: Some(hi),
            ..Self::empty()
        }
    }

    pub fn increasing(lo: Endpoint, hi: Endpoint) -> Self {
        Self::monotone(Monotone::Increasing, lo, hi)
    }

    pub fn decreasing(lo: Endpoint, hi: Endpoint) -> Self {
        Self::monotone(Monotone::Decreasing, lo, hi)
    }

    pub fn sign(sign: Sign, threshold: Constant) -> Self {
        ClaimSet {
            strict_sign: Some(StrictSign { sign, threshold }),
            ..Self::empty()
        }
    }

    pub fn abs_monotone(lo: Endpoint) -> Self {
        ClaimSet {
            absolutely_monotone: true,
            range_lo: Some(lo),
            range_hi: Some(Endpoint::PosInf),
            ..Self::empty()
        }
    }

    pub fn with_convexity(mut self, c: Convexity) -> Self {
        self.convexity = c;
        self
    }

    pub fn conjecture(mut self) -> Self {
        self.conjectural = true;
        self
    }

    /// Both range ends, when present.
    pub fn range(&self) -> Option<(&Endpoint, &Endpoint)> {
        Some((self.range_lo.as_ref()?, self.range_hi.as_ref()?))
    }

    /// The endpoint reached as `r → 0⁺` according to the monotone claim.
    pub fn endpoint_at_zero(&self) -> Option<&Endpoint> {
        match self.monotone {
            Monotone::Increasing => self.range_lo.as_ref(),
            Monotone::Decreasing => self.range_hi.as_ref(),
            Monotone::None if self.absolutely_monotone => self.range_lo.as_ref(),
            Monotone::None => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::empty()
    }
}
