//! Individual claim checks: grid sweeps of a function, exact sequence and
//! coefficient comparisons.

use std::cmp::Ordering;
use std::time::Instant;

use rug::{Float, Rational};

use super::grid::GridSpec;
use super::report::{MinMargin, ReportKind, Status, VerificationReport, Witness};
use crate::approx::{parse_decimal, Approx};
use crate::constant::{Constant, Endpoint};
use crate::error::{Error, Result};
use crate::exact::sequences::{a_table, b_closed_form};
use crate::exact::{fmt_rational, named_series, seq_table, NamedSeries, SequenceId};
use crate::functions::registry::argument_is_x;
use crate::functions::{
    eval_approx, fn_claims, fn_coeffs, limit_at_zero, Convexity, FunctionId, Monotone, Path, Sign,
    Var,
};
use crate::precision::PrecisionConfig;

/// Extra bits for constants compared against function values.
const CONST_GUARD: u32 = 32;

pub(crate) enum Decided {
    Holds(Approx),
    Violated,
    Unknown,
}

/// Sign of a margin, escalating once on a tie and re-checking an escalated
/// decision at twice that precision.
pub(crate) fn decide(
    prec: &PrecisionConfig,
    first: Approx,
    margin: impl Fn(u32) -> Result<Approx>,
) -> Result<Decided> {
    if first.certainly_positive() {
        return Ok(Decided::Holds(first));
    }
    if first.certainly_negative() {
        return Ok(Decided::Violated);
    }
    let mut bits = prec.bits;
    for _ in 0..prec.max_escalations {
        bits *= prec.escalation_factor;
        let m = margin(bits)?;
        if m.certainly_positive() || m.certainly_negative() {
            let c = margin(bits * 2)?;
            if c.sign() != m.sign() {
                return Ok(Decided::Unknown);
            }
            return Ok(if m.certainly_positive() {
                Decided::Holds(m)
            } else {
                Decided::Violated
            });
        }
    }
    Ok(Decided::Unknown)
}

fn at(id: &FunctionId, r: &Float, bits: u32) -> Result<Approx> {
    eval_approx(id, r, bits, Path::Auto)
}

fn sample(id: &FunctionId, pts: &[Float], bits: u32) -> Result<Vec<Approx>> {
    crate::par::map(pts, |r| at(id, r, bits))
        .into_iter()
        .collect()
}

/// Values of one function on a grid, shared by several checks.
pub(crate) struct Sampled<'a> {
    pub id: &'a FunctionId,
    pub grid: &'a GridSpec,
    pub pts: Vec<Float>,
    pub vals: Vec<Approx>,
}

impl<'a> Sampled<'a> {
    pub fn new(id: &'a FunctionId, grid: &'a GridSpec, bits: u32) -> Result<Self> {
        let pts = grid.points();
        let vals = sample(id, &pts, bits)?;
        Ok(Sampled {
            id,
            grid,
            pts,
            vals,
        })
    }
}

fn r_str(r: &Float) -> String {
    format!("r={}", r.to_f64())
}

/// Records the outcome of one decided comparison; returns false once the report has failed.
fn record(
    rep: &mut VerificationReport,
    mm: &mut MinMargin,
    d: Decided,
    at: impl Fn() -> String,
    w: impl FnOnce() -> Witness,
) -> bool {
    match d {
        Decided::Holds(m) => {
            mm.see(&m, at);
            true
        }
        Decided::Violated => {
            rep.fail(w());
            false
        }
        Decided::Unknown => {
            rep.fail(w());
            rep.note = Some("indeterminate after escalation".into());
            false
        }
    }
}

fn finish(mut rep: VerificationReport, mm: MinMargin, start: Instant) -> VerificationReport {
    mm.write(&mut rep);
    rep.set_elapsed(start.elapsed());
    rep
}

fn failed_eval(mut rep: VerificationReport, e: &Error, start: Instant) -> VerificationReport {
    rep.status = Status::Fail;
    rep.witness = Some(Witness {
        r: "-".into(),
        lhs: "-".into(),
        rhs: "-".into(),
    });
    rep.note = Some(format!("evaluation failed: {e}"));
    rep.set_elapsed(start.elapsed());
    rep
}

pub(crate) fn monotone_report(
    s: &Sampled,
    dir: Monotone,
    prec: &PrecisionConfig,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, prec.bits).with_grid(s.grid);
    let mut mm = MinMargin::default();
    let inc = dir == Monotone::Increasing;
    let oriented = |a: &Approx, b: &Approx| if inc { b - a } else { a - b };
    for i in 0..s.pts.len().saturating_sub(1) {
        let (r0, r1) = (&s.pts[i], &s.pts[i + 1]);
        let first = oriented(&s.vals[i], &s.vals[i + 1]);
        let d = decide(prec, first, |b| {
            Ok(oriented(&at(s.id, r0, b)?, &at(s.id, r1, b)?))
        });
        let d = match d {
            Ok(d) => d,
            Err(e) => return failed_eval(rep, &e, start),
        };
        let (lhs, rhs) = if inc {
            (&s.vals[i], &s.vals[i + 1])
        } else {
            (&s.vals[i + 1], &s.vals[i])
        };
        if !record(
            &mut rep,
            &mut mm,
            d,
            || r_str(r1),
            || Witness::new(r1, lhs, rhs),
        ) {
            rep.note
                .get_or_insert_with(|| format!("pair r={} .. r={}", r0.to_f64(), r1.to_f64()));
            break;
        }
    }
    finish(rep, mm, start)
}

/// The r → 0⁺ end of a range claim, checked exactly and numerically.
#[derive(Clone, Debug)]
pub struct EndpointCheck {
    pub limit: Constant,
    pub claimed: Constant,
    /// `|fn(10⁻³) - claimed|`.
    pub distance: f64,
    /// `|fn(10⁻³) - Σ c_j v^j|` with enough series terms that the truncation is below `10⁻²⁴`.
    pub residual: f64,
}

impl EndpointCheck {
    /// Exact limit equal to the claim and the series reproducing the value to `10⁻²⁰`.
    pub fn passed(&self) -> bool {
        self.limit == self.claimed && self.residual < 1e-20
    }
}

/// Compares the claimed endpoint at `r → 0⁺` with the series limit and with the value at `r = 10⁻³`.
pub fn endpoint_check(id: &FunctionId, prec: &PrecisionConfig) -> Result<EndpointCheck> {
    let claims = fn_claims(id);
    let claimed = claims
        .endpoint_at_zero()
        .and_then(Endpoint::finite)
        .ok_or_else(|| Error::NoSuchClaim(format!("endpoint/{id}")))?
        .clone();
    let limit = limit_at_zero(id)?;
    let bits = prec.bits;
    let r = parse_decimal("0.001", bits + CONST_GUARD)?;
    let val = at(id, &r, bits)?;
    let dist = (&val - &claimed.eval(bits + CONST_GUARD)).abs();
    let v_r = argument_is_x(id.name());
    let (var, pre, _) = fn_coeffs(id, 1)?;
    let v = if v_r || var == Var::R {
        r.clone()
    } else {
        Float::with_val(bits + CONST_GUARD, r.square_ref())
    };
    let digits = -v.to_f64().log10();
    let terms = (24.0 / digits).ceil() as usize + 1;
    let (_, _, coeffs) = fn_coeffs(id, terms)?;
    let wp = bits + CONST_GUARD;
    let vv = Approx::exact(v);
    let mut poly = Approx::zero(wp);
    for c in coeffs.iter().rev() {
        poly = &(&poly * &vv) + &c.eval(wp);
    }
    if pre > 0 {
        poly = &poly * &Approx::exact(r.clone()).powi(pre);
    }
    let res = (&val - &poly).abs();
    Ok(EndpointCheck {
        limit,
        claimed,
        distance: upper(&dist),
        residual: upper(&res),
    })
}

fn upper(a: &Approx) -> f64 {
    Float::with_val(64, a.value() + a.err()).to_f64()
}

pub(crate) fn range_report(
    s: &Sampled,
    prec: &PrecisionConfig,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, prec.bits).with_grid(s.grid);
    let mut mm = MinMargin::default();
    let claims = fn_claims(s.id);
    let (lo, hi) = match claims.range() {
        Some((lo, hi)) => (lo.finite().cloned(), hi.finite().cloned()),
        None => (None, None),
    };
    let sides = [(lo, true), (hi, false)];
    'outer: for (i, r) in s.pts.iter().enumerate() {
        for (c, is_lo) in &sides {
            let Some(c) = c else { continue };
            let margin = |v: &Approx, bits: u32| {
                let e = c.eval(bits + CONST_GUARD);
                if *is_lo {
                    v - &e
                } else {
                    &e - v
                }
            };
            let d = decide(prec, margin(&s.vals[i], prec.bits), |b| {
                Ok(margin(&at(s.id, r, b)?, b))
            });
            let d = match d {
                Ok(d) => d,
                Err(e) => return failed_eval(rep, &e, start),
            };
            let e = c.eval(prec.bits + CONST_GUARD);
            let (lhs, rhs) = if *is_lo {
                (e, s.vals[i].clone())
            } else {
                (s.vals[i].clone(), e)
            };
            if !record(
                &mut rep,
                &mut mm,
                d,
                || r_str(r),
                || Witness::new(r, &lhs, &rhs),
            ) {
                break 'outer;
            }
        }
    }
    if rep.passed()
        && claims
            .endpoint_at_zero()
            .and_then(Endpoint::finite)
            .is_some()
    {
        match endpoint_check(s.id, prec) {
            Ok(ep) if ep.passed() => {
                rep.note = Some(format!(
                    "limit at 0 = {}; |value(0.001) - limit| = {:.3e}; series residual {:.1e}",
                    ep.limit, ep.distance, ep.residual
                ));
            }
            Ok(ep) => {
                rep.fail(Witness {
                    r: "0.001".into(),
                    lhs: ep.limit.to_string(),
                    rhs: ep.claimed.to_string(),
                });
                rep.note = Some(format!(
                    "endpoint mismatch: distance {:.3e}, series residual {:.1e}",
                    ep.distance, ep.residual
                ));
            }
            Err(e) => return failed_eval(rep, &e, start),
        }
    }
    finish(rep, mm, start)
}

pub(crate) fn sign_report(
    s: &Sampled,
    prec: &PrecisionConfig,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, prec.bits).with_grid(s.grid);
    let mut mm = MinMargin::default();
    let Some(ss) = fn_claims(s.id).strict_sign else {
        return failed_eval(rep, &Error::NoSuchClaim(claim_id.into()), start);
    };
    let pos = ss.sign == Sign::Positive;
    let margin = |v: &Approx, bits: u32| {
        let t = ss.threshold.eval(bits + CONST_GUARD);
        if pos {
            v - &t
        } else {
            &t - v
        }
    };
    for (r, v) in s.pts.iter().zip(&s.vals) {
        let d = match decide(prec, margin(v, prec.bits), |b| {
            Ok(margin(&at(s.id, r, b)?, b))
        }) {
            Ok(d) => d,
            Err(e) => return failed_eval(rep, &e, start),
        };
        let t = ss.threshold.eval(prec.bits + CONST_GUARD);
        let (lhs, rhs) = if pos { (t, v.clone()) } else { (v.clone(), t) };
        if !record(
            &mut rep,
            &mut mm,
            d,
            || r_str(r),
            || Witness::new(r, &lhs, &rhs),
        ) {
            break;
        }
    }
    finish(rep, mm, start)
}

/// `(v₂ - v₁)(r₁ - r₀) - (v₁ - v₀)(r₂ - r₁)`: a positive multiple of the second divided difference.
fn second_difference(r: [&Float; 3], v: [&Approx; 3]) -> Approx {
    let h0 = Approx::exact(Float::with_val(128, r[1] - r[0]));
    let h1 = Approx::exact(Float::with_val(128, r[2] - r[1]));
    &(&(v[2] - v[1]) * &h0) - &(&(v[1] - v[0]) * &h1)
}

pub(crate) fn convexity_report(
    id: &FunctionId,
    conv: Convexity,
    grid: &GridSpec,
    prec: &PrecisionConfig,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, prec.bits).with_grid(grid);
    let mut mm = MinMargin::default();
    let s = match Sampled::new(id, grid, prec.bits) {
        Ok(s) => s,
        Err(e) => return failed_eval(rep, &e, start),
    };
    let convex = conv == Convexity::Convex;
    let oriented = |d: Approx| if convex { d } else { -d };
    for i in 1..s.pts.len().saturating_sub(1) {
        let r = [&s.pts[i - 1], &s.pts[i], &s.pts[i + 1]];
        let first = oriented(second_difference(
            r,
            [&s.vals[i - 1], &s.vals[i], &s.vals[i + 1]],
        ));
        let d = decide(prec, first, |b| {
            let v = [at(id, r[0], b)?, at(id, r[1], b)?, at(id, r[2], b)?];
            Ok(oriented(second_difference(r, [&v[0], &v[1], &v[2]])))
        });
        let d = match d {
            Ok(d) => d,
            Err(e) => return failed_eval(rep, &e, start),
        };
        let mid = Approx::exact(
            Float::with_val(
                s.vals[i].prec(),
                s.vals[i - 1].value() + s.vals[i + 1].value(),
            ) / 2u32,
        );
        let (lhs, rhs) = if convex {
            (&s.vals[i], &mid)
        } else {
            (&mid, &s.vals[i])
        };
        if !record(
            &mut rep,
            &mut mm,
            d,
            || r_str(r[1]),
            || Witness::new(r[1], lhs, rhs),
        ) {
            break;
        }
    }
    finish(rep, mm, start)
}

/// Exact sign of a coefficient of the form `q`, `qπ` or `q/π`; numeric otherwise.
fn constant_sign(c: &Constant) -> Option<Ordering> {
    for k in [0, -1, 1] {
        if let Some(q) = c.mul_pi_pow(k).as_rational() {
            return Some(q.cmp0());
        }
    }
    c.eval(512).sign()
}

/// Maclaurin coefficients `0..n_max` all strictly positive.
pub fn verify_abs_monotone(id: &FunctionId, n_max: usize) -> Result<VerificationReport> {
    let claims = fn_claims(id);
    if !claims.absolutely_monotone && !claims.conjectured_abs_monotone {
        return Err(Error::NoSuchClaim(format!("abs-monotone/{id}")));
    }
    let kind = if claims.absolutely_monotone {
        ReportKind::Gating
    } else {
        ReportKind::Conjecture
    };
    let start = Instant::now();
    let mut rep = VerificationReport::new(format!("abs-monotone/{id}"), kind, 0);
    let coeffs: Vec<Constant> = match id.to_string().parse::<NamedSeries>().ok() {
        Some(ps) if !claims.absolutely_monotone => named_series(ps, n_max - 1)?
            .coeffs()
            .iter()
            .cloned()
            .map(Constant::q)
            .collect(),
        _ => fn_coeffs(id, n_max)?.2,
    };
    for (n, c) in coeffs.iter().enumerate() {
        if constant_sign(c) != Some(Ordering::Greater) {
            rep.fail(Witness::index(n, "0", c));
            break;
        }
    }
    rep.note = Some(format!("coefficients 0..{n_max}"));
    rep.set_elapsed(start.elapsed());
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceClaim {
    Increasing,
    Decreasing,
    Positive,
}

impl SequenceClaim {
    pub fn tag(self) -> &'static str {
        match self {
            SequenceClaim::Increasing => "increasing",
            SequenceClaim::Decreasing => "decreasing",
            SequenceClaim::Positive => "positive",
        }
    }
}

/// First index from which a positivity claim is made.
fn positive_from(id: SequenceId) -> usize {
    match id {
        SequenceId::ATilde => 2,
        _ => 0,
    }
}

/// Exact check of a monotone claim for `n < n_max` or positivity for `n ≤ n_max`.
pub fn verify_sequence(id: SequenceId, claim: SequenceClaim, n_max: usize) -> VerificationReport {
    verify_sequence_as(
        id,
        claim,
        n_max,
        &format!("sequence/{}/{}", id.tag(), claim.tag()),
        ReportKind::Gating,
    )
}

pub(crate) fn verify_sequence_as(
    id: SequenceId,
    claim: SequenceClaim,
    n_max: usize,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, 0);
    let t = seq_table(id, n_max);
    let bad = match claim {
        SequenceClaim::Positive => (positive_from(id)..=n_max)
            .find(|&n| t[n] <= 0)
            .map(|n| (n, "0".to_string(), fmt_rational(&t[n]))),
        SequenceClaim::Increasing => (0..n_max)
            .find(|&n| t[n] >= t[n + 1])
            .map(|n| (n, fmt_rational(&t[n]), fmt_rational(&t[n + 1]))),
        SequenceClaim::Decreasing => (0..n_max)
            .find(|&n| t[n] <= t[n + 1])
            .map(|n| (n, fmt_rational(&t[n + 1]), fmt_rational(&t[n]))),
    };
    if let Some((n, lhs, rhs)) = bad {
        rep.fail(Witness::index(n, lhs, rhs));
    }
    rep.note = Some(format!("n_max={n_max}"));
    rep.set_elapsed(start.elapsed());
    rep
}

/// `b_n` against its closed form with constant `k` (123 is the true one), for `n ≤ n_max`.
pub(crate) fn verify_b_closed_form(
    n_max: usize,
    k: i64,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, 0);
    let b = seq_table(SequenceId::B, n_max);
    let a = a_table(n_max + 2);
    for n in 0..=n_max {
        let c = b_closed_form(n, k, &a[n + 2]);
        if c != b[n] || b[n] <= 0 {
            rep.fail(Witness::index(n, fmt_rational(&b[n]), fmt_rational(&c)));
            break;
        }
    }
    rep.note = Some(format!("n_max={n_max}"));
    rep.set_elapsed(start.elapsed());
    rep
}

/// Derived coefficients of `name` equal to `printed`, term by term.
pub fn verify_series_coeffs(name: NamedSeries, printed: &[Rational]) -> Result<VerificationReport> {
    verify_series_coeffs_as(name, printed, &format!("coeffs/{name}"), ReportKind::Gating)
}

pub(crate) fn verify_series_coeffs_as(
    name: NamedSeries,
    printed: &[Rational],
    claim_id: &str,
    kind: ReportKind,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, 0);
    if printed.is_empty() {
        return Err(Error::ParamOutOfRange("no printed coefficients".into()));
    }
    let derived = named_series(name, printed.len() - 1)?;
    if let Some(n) = (0..printed.len()).find(|&n| derived.coeff(n) != &printed[n]) {
        rep.fail(Witness::index(
            n,
            fmt_rational(derived.coeff(n)),
            fmt_rational(&printed[n]),
        ));
    }
    rep.note = Some(format!("{} terms", printed.len()));
    rep.set_elapsed(start.elapsed());
    Ok(rep)
}

fn claim_kind(conjectural: bool) -> ReportKind {
    if conjectural {
        ReportKind::Conjecture
    } else {
        ReportKind::Gating
    }
}

/// Consecutive differences carry the registered monotone direction.
pub fn verify_monotone(
    id: &FunctionId,
    grid: &GridSpec,
    prec: &PrecisionConfig,
) -> Result<VerificationReport> {
    let c = fn_claims(id);
    if c.monotone == Monotone::None {
        return Err(Error::NoSuchClaim(format!("monotone/{id}")));
    }
    let s = Sampled::new(id, grid, prec.bits)?;
    Ok(monotone_report(
        &s,
        c.monotone,
        prec,
        &format!("monotone/{id}"),
        claim_kind(c.conjectural),
    ))
}

/// Values strictly inside the registered range, plus the endpoint at 0.
pub fn verify_range(
    id: &FunctionId,
    grid: &GridSpec,
    prec: &PrecisionConfig,
) -> Result<VerificationReport> {
    let c = fn_claims(id);
    if c.range().is_none() {
        return Err(Error::NoSuchClaim(format!("range/{id}")));
    }
    let s = Sampled::new(id, grid, prec.bits)?;
    Ok(range_report(
        &s,
        prec,
        &format!("range/{id}"),
        claim_kind(c.conjectural),
    ))
}

/// Strict inequality against the registered threshold.
pub fn verify_sign(
    id: &FunctionId,
    grid: &GridSpec,
    prec: &PrecisionConfig,
) -> Result<VerificationReport> {
    if fn_claims(id).strict_sign.is_none() {
        return Err(Error::NoSuchClaim(format!("sign/{id}")));
    }
    let s = Sampled::new(id, grid, prec.bits)?;
    Ok(sign_report(
        &s,
        prec,
        &format!("sign/{id}"),
        ReportKind::Gating,
    ))
}

/// Second differences carry the registered (or conjectured) convexity.
pub fn verify_convexity(
    id: &FunctionId,
    grid: &GridSpec,
    prec: &PrecisionConfig,
) -> Result<VerificationReport> {
    let c = fn_claims(id);
    let (conv, kind) = if c.convexity != Convexity::None {
        (c.convexity, claim_kind(c.conjectural))
    } else if c.conjectured_convexity != Convexity::None {
        (c.conjectured_convexity, ReportKind::Conjecture)
    } else {
        return Err(Error::NoSuchClaim(format!("convexity/{id}")));
    };
    Ok(convexity_report(
        id,
        conv,
        grid,
        prec,
        &format!("convexity/{id}"),
        kind,
    ))
}
