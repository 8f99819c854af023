//! Suites of claims and the negative controls that guard them.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::{Float, Rational};

use super::checks::{
    convexity_report, monotone_report, range_report, sign_report, verify_abs_monotone,
    verify_b_closed_form, verify_sequence, verify_sequence_as, verify_series_coeffs,
    verify_series_coeffs_as, Sampled, SequenceClaim,
};
use super::grid::GridSpec;
use super::printed::printed_coefficients;
use super::report::{ReportKind, Status, VerificationReport, Witness};
use crate::approx::float_to_decimal;
use crate::bounds::{
    bound_point, check_bounds, crossover_r0, sharpness_witness, sign_change_scan, BoundFamily,
    Sharpness, Side,
};
use crate::error::{Error, Result};
use crate::exact::{NamedSeries, SequenceId};
use crate::functions::{list_functions, Convexity, FunctionId, Monotone};
use crate::precision::PrecisionConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Acceptance,
    Conjecture,
    Full,
}

impl Suite {
    fn includes(self, kind: ReportKind) -> bool {
        match kind {
            ReportKind::Control => true,
            ReportKind::Gating => self != Suite::Conjecture,
            ReportKind::Conjecture => self != Suite::Acceptance,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Acceptance => "acceptance",
            Suite::Conjecture => "conjecture",
            Suite::Full => "full",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "acceptance" => Ok(Suite::Acceptance),
            "conjecture" => Ok(Suite::Conjecture),
            "full" => Ok(Suite::Full),
            _ => Err(Error::Parse(s.into())),
        }
    }
}

/// Sizes used by a suite run.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Grid for monotone, range, sign and bound sweeps.
    pub grid: GridSpec,
    /// Grid for second differences.
    pub convexity_grid: GridSpec,
    pub sequence_n: usize,
    pub positivity_n: usize,
    pub abs_monotone_n: usize,
    pub conjecture_coeff_n: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            grid: GridSpec::composite(10_000).expect("valid grid"),
            convexity_grid: GridSpec::uniform(1000, 1e-3, 1.0 - 1e-3).expect("valid grid"),
            sequence_n: 10_000,
            positivity_n: 1000,
            abs_monotone_n: 500,
            conjecture_coeff_n: 200,
        }
    }
}

impl SuiteOptions {
    pub fn with_grid_points(mut self, n: usize) -> Result<Self> {
        self.grid = GridSpec::composite(n)?;
        Ok(self)
    }
}

type Run<'a> = Box<dyn Fn() -> Vec<VerificationReport> + Send + Sync + 'a>;

struct Task<'a> {
    claims: Vec<(String, ReportKind)>,
    run: Run<'a>,
}

impl<'a> Task<'a> {
    fn one(
        id: String,
        kind: ReportKind,
        f: impl Fn() -> VerificationReport + Send + Sync + 'a,
    ) -> Self {
        Task {
            claims: vec![(id, kind)],
            run: Box::new(move || vec![f()]),
        }
    }
}

fn error_report(id: &str, kind: ReportKind, bits: u32, e: &Error) -> VerificationReport {
    let mut rep = VerificationReport::new(id, kind, bits);
    rep.fail(Witness {
        r: "-".into(),
        lhs: "-".into(),
        rhs: "-".into(),
    });
    rep.note = Some(e.to_string());
    rep
}

fn or_error(
    id: &str,
    kind: ReportKind,
    bits: u32,
    r: Result<VerificationReport>,
) -> VerificationReport {
    r.unwrap_or_else(|e| error_report(id, kind, bits, &e))
}

fn kind_of(conjectural: bool) -> ReportKind {
    if conjectural {
        ReportKind::Conjecture
    } else {
        ReportKind::Gating
    }
}

fn function_tasks<'a>(prec: &'a PrecisionConfig, opt: &'a SuiteOptions) -> Vec<Task<'a>> {
    let mut tasks = Vec::new();
    for e in list_functions() {
        let c = e.claims.clone();
        let kind = kind_of(c.conjectural);
        let id = e.id.clone();
        let mut claims = Vec::new();
        if c.monotone != Monotone::None {
            claims.push((format!("monotone/{id}"), kind));
        }
        if c.range().is_some() && (c.monotone != Monotone::None || c.absolutely_monotone) {
            claims.push((format!("range/{id}"), kind));
        }
        if c.strict_sign.is_some() {
            claims.push((format!("sign/{id}"), kind));
        }
        if !claims.is_empty() {
            let id = id.clone();
            let cl = claims.clone();
            let mono = c.monotone;
            tasks.push(Task {
                claims,
                run: Box::new(move || {
                    let s = match Sampled::new(&id, &opt.grid, prec.bits) {
                        Ok(s) => s,
                        Err(e) => {
                            return cl
                                .iter()
                                .map(|(n, k)| error_report(n, *k, prec.bits, &e))
                                .collect()
                        }
                    };
                    cl.iter()
                        .map(|(n, k)| match n.split('/').next() {
                            Some("monotone") => monotone_report(&s, mono, prec, n, *k),
                            Some("range") => range_report(&s, prec, n, *k),
                            _ => sign_report(&s, prec, n, *k),
                        })
                        .collect()
                }),
            });
        }
        let conv = if c.convexity != Convexity::None {
            Some((c.convexity, kind))
        } else if c.conjectured_convexity != Convexity::None {
            Some((c.conjectured_convexity, ReportKind::Conjecture))
        } else {
            None
        };
        if let Some((cv, k)) = conv {
            let id = id.clone();
            let name = format!("convexity/{id}");
            tasks.push(Task::one(name.clone(), k, move || {
                convexity_report(&id, cv, &opt.convexity_grid, prec, &name, k)
            }));
        }
        if c.absolutely_monotone || c.conjectured_abs_monotone {
            let k = kind_of(!c.absolutely_monotone);
            let n = if c.absolutely_monotone {
                opt.abs_monotone_n
            } else {
                opt.conjecture_coeff_n
            };
            let name = format!("abs-monotone/{id}");
            let name2 = name.clone();
            tasks.push(Task::one(name, k, move || {
                or_error(&name2, k, 0, verify_abs_monotone(&id, n))
            }));
        }
    }
    tasks
}

fn bound_tasks<'a>(prec: &'a PrecisionConfig, opt: &'a SuiteOptions) -> Vec<Task<'a>> {
    BoundFamily::acceptance()
        .into_iter()
        .chain(BoundFamily::conjectural())
        .map(|fam| {
            let kind = kind_of(fam.key.conjectural());
            Task::one(format!("bound/{fam}"), kind, move || {
                check_bounds(&fam, &opt.grid, prec)
            })
        })
        .collect()
}

fn exact_tasks<'a>(opt: &'a SuiteOptions) -> Vec<Task<'a>> {
    let mut tasks = Vec::new();
    let seqs = [
        (SequenceId::C, SequenceClaim::Decreasing, opt.sequence_n),
        (
            SequenceId::CTilde,
            SequenceClaim::Decreasing,
            opt.sequence_n,
        ),
        (SequenceId::D, SequenceClaim::Increasing, opt.sequence_n),
        (SequenceId::B, SequenceClaim::Positive, opt.positivity_n),
        (
            SequenceId::ATilde,
            SequenceClaim::Positive,
            opt.positivity_n,
        ),
    ];
    for (s, c, n) in seqs {
        tasks.push(Task::one(
            format!("sequence/{}/{}", s.tag(), c.tag()),
            ReportKind::Gating,
            move || verify_sequence(s, c, n),
        ));
    }
    let n = opt.positivity_n;
    tasks.push(Task::one(
        "sequence/b/closed-form".into(),
        ReportKind::Gating,
        move || verify_b_closed_form(n, 123, "sequence/b/closed-form", ReportKind::Gating),
    ));
    for s in [
        NamedSeries::F,
        NamedSeries::G,
        NamedSeries::H11,
        NamedSeries::H12,
    ] {
        let name = format!("coeffs/{s}");
        let name2 = name.clone();
        tasks.push(Task::one(name, ReportKind::Gating, move || {
            let printed = printed_coefficients(s).expect("printed series");
            or_error(
                &name2,
                ReportKind::Gating,
                0,
                verify_series_coeffs(s, &printed),
            )
        }));
    }
    tasks
}

/// Hardened constants: the first two must be violated somewhere; the
/// other two approach their limit too slowly for any grid to reach.
const SHARPNESS: [(&str, Side, i64, bool, &str); 4] = [
    ("Ineq1", Side::Lower, 1, true, ""),
    ("KArth3", Side::Upper, 1, true, ""),
    ("Ineq1", Side::Upper, -1, false, "monotone/f, range/f"),
    ("KArth3", Side::Lower, -1, false, "monotone/f4, range/f4"),
];

fn side_tag(s: Side) -> &'static str {
    match s {
        Side::Lower => "lower",
        Side::Upper => "upper",
    }
}

fn sharpness_tasks<'a>(prec: &'a PrecisionConfig) -> Vec<Task<'a>> {
    SHARPNESS
        .iter()
        .map(|&(fam, side, sign, reachable, evidence)| {
            let id = format!("sharpness/{fam}/{}", side_tag(side));
            let id2 = id.clone();
            Task::one(id, ReportKind::Gating, move || {
                let start = Instant::now();
                let f: BoundFamily = fam.parse().expect("known family");
                let delta = Rational::from((sign, 1000));
                let mut rep = VerificationReport::new(&id2, ReportKind::Gating, prec.bits);
                match sharpness_witness(&f, side, &delta, prec) {
                    Ok(Sharpness::Witness { r, margin, crossing }) => {
                        let mut note = format!("constant moved by {sign}/1000 fails at r={r} (margin {margin})");
                        if let Some(c) = crossing {
                            note.push_str(&format!(", crossing near r={c}"));
                        }
                        rep.note = Some(note);
                    }
                    Ok(Sharpness::NotReachable { points_searched }) if !reachable => {
                        rep.status = Status::NotReachable;
                        rep.note = Some(format!("no violation on {points_searched} points; approach evidence in {evidence}"));
                    }
                    Ok(Sharpness::NotReachable { points_searched }) => {
                        rep.fail(Witness { r: "-".into(), lhs: "no violation".into(), rhs: format!("{points_searched} points") });
                    }
                    Err(e) => rep = error_report(&id2, ReportKind::Gating, prec.bits, &e),
                }
                rep.set_elapsed(start.elapsed());
                rep
            })
        })
        .collect()
}

fn crossover_report(prec: &PrecisionConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut rep = VerificationReport::new("crossover/r0", ReportKind::Gating, prec.bits);
    let c = crossover_r0(prec)?;
    let tol = Float::with_val(64, 1) >> (prec.bits as i32 - 4);
    if c.residual > tol {
        rep.fail(Witness {
            r: float_to_decimal(&c.r0),
            lhs: c.residual.to_string(),
            rhs: tol.to_string(),
        });
    }
    let wp = c.r0.prec();
    let half = Float::with_val(wp, &c.r0 / 2u32);
    let beyond = Float::with_val(wp, Float::with_val(wp, &c.r0 + 1u32) / 2u32);
    let i1: BoundFamily = "Ineq1".parse()?;
    let i2: BoundFamily = "Ineq2".parse()?;
    for (r, first_above) in [(&half, true), (&beyond, false)] {
        let a = bound_point(&i1, r, prec.bits)?;
        let b = bound_point(&i2, r, prec.bits)?;
        let d = if first_above {
            &a.lower - &b.lower
        } else {
            &b.lower - &a.lower
        };
        if rep.passed() && !d.certainly_positive() {
            rep.fail(Witness::new(r, &a.lower, &b.lower));
        }
    }
    rep.note = Some(format!("r0 = {}", c.r0.to_string_radix(10, Some(40))));
    rep.min_margin = Some(c.residual.to_string_radix(10, Some(6)));
    rep.set_elapsed(start.elapsed());
    Ok(rep)
}

fn scan_report(
    target: &str,
    zero_positive: bool,
    prec: &PrecisionConfig,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let id = format!("scan/{target}");
    let mut rep = VerificationReport::new(&id, ReportKind::Gating, prec.bits);
    let s = sign_change_scan(&target.parse::<FunctionId>()?, prec)?;
    let sgn = |p: bool| if p { "+" } else { "-" };
    if s.near_zero.positive != zero_positive || s.near_one.positive == zero_positive {
        rep.fail(Witness {
            r: format!("{} / {}", s.near_zero.lo, s.near_one.hi),
            lhs: sgn(s.near_zero.positive).into(),
            rhs: sgn(s.near_one.positive).into(),
        });
    }
    rep.note = Some(format!(
        "{} on [{:.3e}, {:.6}], {} on [{:.6}, 1 - {:.1e}]",
        sgn(s.near_zero.positive),
        s.near_zero.lo,
        s.near_zero.hi,
        sgn(s.near_one.positive),
        s.near_one.lo,
        1.0 - s.near_one.hi
    ));
    rep.set_elapsed(start.elapsed());
    Ok(rep)
}

fn analysis_tasks<'a>(prec: &'a PrecisionConfig) -> Vec<Task<'a>> {
    let mut v = sharpness_tasks(prec);
    v.push(Task::one(
        "crossover/r0".into(),
        ReportKind::Gating,
        move || {
            or_error(
                "crossover/r0",
                ReportKind::Gating,
                prec.bits,
                crossover_report(prec),
            )
        },
    ));
    for (t, z) in [("h9", true), ("h10", false)] {
        let id = format!("scan/{t}");
        let id2 = id.clone();
        v.push(Task::one(id, ReportKind::Gating, move || {
            or_error(&id2, ReportKind::Gating, prec.bits, scan_report(t, z, prec))
        }));
    }
    v
}

/// Deliberately false claims; each must fail.
fn control_tasks<'a>(prec: &'a PrecisionConfig) -> Vec<Task<'a>> {
    let c = ReportKind::Control;
    vec![
        Task::one("control/f-decreasing".into(), c, move || {
            let f: FunctionId = "f".parse().expect("known function");
            let g = GridSpec::composite(200).expect("valid grid");
            match Sampled::new(&f, &g, prec.bits) {
                Ok(s) => monotone_report(&s, Monotone::Decreasing, prec, "control/f-decreasing", c),
                Err(e) => error_report("control/f-decreasing", c, prec.bits, &e),
            }
        }),
        Task::one("control/c-increasing".into(), c, move || {
            verify_sequence_as(
                SequenceId::C,
                SequenceClaim::Increasing,
                10,
                "control/c-increasing",
                c,
            )
        }),
        Task::one("control/f-coefficient-518".into(), c, move || {
            let mut printed = printed_coefficients(NamedSeries::F).expect("printed series");
            printed[1] = Rational::from((518, 201600));
            or_error(
                "control/f-coefficient-518",
                c,
                0,
                verify_series_coeffs_as(NamedSeries::F, &printed, "control/f-coefficient-518", c),
            )
        }),
        Task::one("control/b-closed-form-124".into(), c, move || {
            verify_b_closed_form(100, 124, "control/b-closed-form-124", c)
        }),
    ]
}

fn matches(claim: &str, filter: &str) -> bool {
    claim == filter
        || claim
            .strip_prefix(filter)
            .is_some_and(|rest| rest.starts_with('/'))
}

/// Runs `suite` with the default sizes.
pub fn run_all(suite: Suite, prec: &PrecisionConfig) -> Result<Vec<VerificationReport>> {
    run_suite(suite, prec, &SuiteOptions::default(), None)
}

/// Runs every claim of `suite` (or only those matching `filter`, a claim id or
/// a `/`-separated prefix of one), sorted by claim id. The negative controls
/// always run; if one passes the run is aborted.
pub fn run_suite(
    suite: Suite,
    prec: &PrecisionConfig,
    opt: &SuiteOptions,
    filter: Option<&str>,
) -> Result<Vec<VerificationReport>> {
    let mut tasks = function_tasks(prec, opt);
    tasks.extend(bound_tasks(prec, opt));
    tasks.extend(exact_tasks(opt));
    tasks.extend(analysis_tasks(prec));
    tasks.extend(control_tasks(prec));
    let keep = |(id, kind): &(String, ReportKind)| {
        suite.includes(*kind)
            && (*kind == ReportKind::Control || filter.is_none_or(|f| matches(id, f)))
    };
    tasks.retain(|t| t.claims.iter().any(keep));
    if let Some(f) = filter {
        if !tasks
            .iter()
            .any(|t| t.claims.iter().any(|(id, _)| matches(id, f)))
        {
            return Err(Error::NoSuchClaim(f.into()));
        }
    }
    let mut reports: Vec<VerificationReport> = crate::par::map(&tasks, |t| (t.run)())
        .into_iter()
        .flatten()
        .filter(|r| keep(&(r.claim_id.clone(), r.kind)))
        .collect();
    reports.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
    if let Some(bad) = reports
        .iter()
        .find(|r| r.kind == ReportKind::Control && r.status != Status::Fail)
    {
        return Err(Error::SelfTestFailed(bad.claim_id.clone()));
    }
    Ok(reports)
}

/// True iff no gating report failed and every control failed.
pub fn suite_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| match r.kind {
        ReportKind::Gating => r.status != Status::Fail,
        ReportKind::Conjecture => true,
        ReportKind::Control => r.status == Status::Fail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteOptions {
        SuiteOptions {
            grid: GridSpec::composite(60).unwrap(),
            convexity_grid: GridSpec::uniform(40, 1e-3, 1.0 - 1e-3).unwrap(),
            sequence_n: 100,
            positivity_n: 100,
            abs_monotone_n: 40,
            conjecture_coeff_n: 20,
        }
    }

    #[test]
    fn filtered_runs_are_sorted_and_carry_controls() {
        let p = PrecisionConfig::new(128);
        let reps = run_suite(Suite::Acceptance, &p, &small(), Some("monotone/f")).unwrap();
        let ids: Vec<&str> = reps.iter().map(|r| r.claim_id.as_str()).collect();
        assert_eq!(
            ids,
            [
                "control/b-closed-form-124",
                "control/c-increasing",
                "control/f-coefficient-518",
                "control/f-decreasing",
                "monotone/f"
            ]
        );
        assert!(suite_passed(&reps));
        assert!(matches!(
            run_suite(Suite::Acceptance, &p, &small(), Some("nothing")),
            Err(Error::NoSuchClaim(_))
        ));
    }

    #[test]
    fn conjecture_claims_are_not_gating() {
        let p = PrecisionConfig::new(128);
        let reps = run_suite(Suite::Conjecture, &p, &small(), Some("abs-monotone")).unwrap();
        let conj: Vec<_> = reps
            .iter()
            .filter(|r| r.kind == ReportKind::Conjecture)
            .collect();
        assert_eq!(conj.len(), 6);
        assert!(conj.iter().all(|r| r.passed()));
        assert_eq!("full".parse::<Suite>().unwrap(), Suite::Full);
    }
}
