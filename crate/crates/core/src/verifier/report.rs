use std::time::Duration;

use rug::Float;
use serde::Serialize;

use super::grid::GridSpec;
use crate::approx::{float_to_decimal, Approx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotReachable,
}

/// Whether a report gates acceptance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Gating,
    Conjecture,
    /// A deliberately false claim that must fail.
    Control,
}

/// A point where a claimed `lhs < rhs` was found not to hold (or not provable).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub r: String,
    pub lhs: String,
    pub rhs: String,
}

impl Witness {
    pub fn new(r: &Float, lhs: &Approx, rhs: &Approx) -> Self {
        Witness {
            r: float_to_decimal(r),
            lhs: short(lhs.value()),
            rhs: short(rhs.value()),
        }
    }

    pub fn index(n: usize, lhs: impl ToString, rhs: impl ToString) -> Self {
        Witness {
            r: format!("n={n}"),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }
}

fn short(v: &Float) -> String {
    v.to_string_radix(10, Some(30))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub kind: ReportKind,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    pub precision_bits: u32,
    /// Smallest certified margin, as a decimal string.
    pub min_margin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_margin_at: Option<String>,
    pub witness: Option<Witness>,
    pub elapsed_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn new(claim_id: impl Into<String>, kind: ReportKind, precision_bits: u32) -> Self {
        VerificationReport {
            claim_id: claim_id.into(),
            kind,
            status: Status::Pass,
            grid: None,
            precision_bits,
            min_margin: None,
            min_margin_at: None,
            witness: None,
            elapsed_ms: 0,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn fail(&mut self, w: Witness) {
        self.status = Status::Fail;
        self.witness = Some(w);
    }

    pub fn with_grid(mut self, g: &GridSpec) -> Self {
        self.grid = Some(g.clone());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn set_elapsed(&mut self, d: Duration) {
        self.elapsed_ms = d.as_millis();
    }

    pub fn line(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotReachable => "NOT-REACHABLE",
        };
        let mut s = format!("{status:<13} {}", self.claim_id);
        if let Some(m) = &self.min_margin {
            s.push_str(&format!("  min_margin={}", trim(m)));
        }
        if let Some(w) = &self.witness {
            s.push_str(&format!(
                "  witness r={} lhs={} rhs={}",
                trim(&w.r),
                trim(&w.lhs),
                trim(&w.rhs)
            ));
        }
        if let Some(n) = &self.note {
            s.push_str(&format!("  ({n})"));
        }
        s
    }
}

fn trim(s: &str) -> String {
    if s.len() > 24 {
        format!("{}…", &s[..24])
    } else {
        s.to_string()
    }
}

/// Tracks the smallest margin seen.
#[derive(Default)]
pub(crate) struct MinMargin {
    best: Option<(Float, String)>,
}

impl MinMargin {
    pub fn see(&mut self, m: &Approx, at: impl FnOnce() -> String) {
        if self.best.as_ref().is_none_or(|(b, _)| m.value() < b) {
            self.best = Some((m.value().clone(), at()));
        }
    }

    pub fn write(self, rep: &mut VerificationReport) {
        if let Some((m, at)) = self.best {
            rep.min_margin = Some(m.to_string_radix(10, Some(8)));
            rep.min_margin_at = Some(at);
        }
    }
}
