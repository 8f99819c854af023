//! Two-sided elementary bounds for `2K/π` (and for `E/K` and two ratios of
//! K, E and arth), their margins, sharpness search and crossover analysis.
//!
//! Margins are computed in forms that avoid cancellation: exponent bounds
//! through the logarithmic gap, polynomial bounds through remainder
//! functions, and gaps against a series limit through the series tail.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rug::{Float, Rational};
use serde::Serialize;

use crate::approx::{float_to_decimal, Approx, EvalResult};
use crate::constant::Constant;
use crate::ell::{Arg, Modulus};
use crate::error::{Error, Result};
use crate::exact::{seq, SequenceId};
use crate::functions::direct::Ctx;
use crate::functions::{eval_approx, limit_at_zero, tail_approx, FunctionId, Path};
use crate::precision::PrecisionConfig;
use crate::verifier::grid::GridSpec;
use crate::verifier::report::{MinMargin, ReportKind, Status, VerificationReport, Witness};

const GUARD: u32 = 64;
/// Extra bits passed to function evaluations inside a margin.
const INNER: u32 = 32;
pub const KARTH1_MAX_N: usize = 8;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyKey {
    #[serde(rename = "AVV")]
    Avv,
    #[serde(rename = "AQ")]
    Aq,
    #[serde(rename = "KS")]
    Ks,
    Ineq1,
    Ineq2,
    KArth1,
    KArth2,
    KArth3,
    Bound1OfK,
    #[serde(rename = "EK_PQ")]
    EkPq,
    F25,
    F24,
    Conj1,
    Conj2,
}

impl FamilyKey {
    pub const ALL: [FamilyKey; 14] = [
        FamilyKey::Avv,
        FamilyKey::Aq,
        FamilyKey::Ks,
        FamilyKey::Ineq1,
        FamilyKey::Ineq2,
        FamilyKey::KArth1,
        FamilyKey::KArth2,
        FamilyKey::KArth3,
        FamilyKey::Bound1OfK,
        FamilyKey::EkPq,
        FamilyKey::F25,
        FamilyKey::F24,
        FamilyKey::Conj1,
        FamilyKey::Conj2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKey::Avv => "AVV",
            FamilyKey::Aq => "AQ",
            FamilyKey::Ks => "KS",
            FamilyKey::Ineq1 => "Ineq1",
            FamilyKey::Ineq2 => "Ineq2",
            FamilyKey::KArth1 => "KArth1",
            FamilyKey::KArth2 => "KArth2",
            FamilyKey::KArth3 => "KArth3",
            FamilyKey::Bound1OfK => "Bound1OfK",
            FamilyKey::EkPq => "EK_PQ",
            FamilyKey::F25 => "F25",
            FamilyKey::F24 => "F24",
            FamilyKey::Conj1 => "Conj1",
            FamilyKey::Conj2 => "Conj2",
        }
    }

    pub fn conjectural(self) -> bool {
        matches!(self, FamilyKey::Conj1 | FamilyKey::Conj2)
    }

    /// What the family bounds.
    pub fn target(self) -> &'static str {
        match self {
            FamilyKey::EkPq => "E/K",
            FamilyKey::F25 => "(K-E)/(r^2 K)",
            FamilyKey::F24 => "f25",
            _ => "2K/pi",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// A bound family with its constants. `lower_param`/`upper_param` are the
/// constants a sharpness search perturbs (α, β for `Ineq1`; α, β for
/// `KArth2`; δ, η for `KArth3`).
#[derive(Clone, Debug, PartialEq)]
pub struct BoundFamily {
    pub key: FamilyKey,
    /// `n` of `KArth1`.
    pub n: usize,
    pub lower_param: Option<Constant>,
    pub upper_param: Option<Constant>,
}

impl BoundFamily {
    pub fn new(key: FamilyKey) -> Self {
        let (lo, hi) = match key {
            FamilyKey::Ineq1 => (Some(Constant::ratio(1, 320)), Some(Constant::ratio(1, 4))),
            FamilyKey::KArth2 => (Some(karth2_alpha()), Some(Constant::ratio(871, 48384))),
            FamilyKey::KArth3 => (
                Some(&Constant::q(1) - &Constant::inv_pi(q(8, 3))),
                Some(Constant::ratio(1, 80)),
            ),
            _ => (None, None),
        };
        BoundFamily {
            key,
            n: 1,
            lower_param: lo,
            upper_param: hi,
        }
    }

    pub fn karth1(n: usize) -> Result<Self> {
        if !(1..=KARTH1_MAX_N).contains(&n) {
            return Err(Error::ParamOutOfRange(format!(
                "KArth1 needs 1 <= n <= {KARTH1_MAX_N}, got {n}"
            )));
        }
        Ok(BoundFamily {
            n,
            ..Self::new(FamilyKey::KArth1)
        })
    }

    /// Every family used by the acceptance sweep, with `KArth1` for n = 1..4.
    pub fn acceptance() -> Vec<Self> {
        let mut v = Vec::new();
        for k in FamilyKey::ALL {
            if k.conjectural() {
                continue;
            }
            if k == FamilyKey::KArth1 {
                v.extend((1..=4).map(|n| Self::karth1(n).unwrap()));
            } else {
                v.push(Self::new(k));
            }
        }
        v
    }

    pub fn conjectural() -> Vec<Self> {
        vec![Self::new(FamilyKey::Conj1), Self::new(FamilyKey::Conj2)]
    }

    /// Adds `delta` to the constant of `side`.
    pub fn perturbed(&self, side: Side, delta: &Rational) -> Result<Self> {
        let mut f = self.clone();
        let slot = match side {
            Side::Lower => &mut f.lower_param,
            Side::Upper => &mut f.upper_param,
        };
        match slot {
            Some(c) => *c = &*c + &Constant::q(delta.clone()),
            None => {
                return Err(Error::ParamOutOfRange(format!(
                    "{self} has no {side:?} constant"
                )))
            }
        }
        Ok(f)
    }

    fn lp(&self) -> &Constant {
        self.lower_param.as_ref().expect("family constant")
    }

    fn up(&self) -> &Constant {
        self.upper_param.as_ref().expect("family constant")
    }
}

fn karth2_alpha() -> Constant {
    &Constant::ratio(2549, 2880) - &Constant::inv_pi(2)
}

impl fmt::Display for BoundFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key == FamilyKey::KArth1 {
            write!(f, "KArth1({})", self.n)
        } else {
            write!(f, "{}", self.key.as_str())
        }
    }
}

/// `AVV`, `KS`, `EK_PQ`, …; `KArth1(n)` or `KArth1:n` for the first family.
impl FromStr for BoundFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("karth1") {
            let n = rest.trim_start_matches([':', '(']).trim_end_matches(')');
            let n = if n.is_empty() {
                1
            } else {
                n.parse().map_err(|_| Error::UnknownFamily(s.to_string()))?
            };
            return Self::karth1(n);
        }
        FamilyKey::ALL
            .iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .map(|&k| Self::new(k))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Lower bound, target and upper bound at a point with both margins
/// (`target - lower` and `upper - target`).
#[derive(Clone, Debug)]
pub struct BoundPoint {
    pub r: Float,
    pub lower: Approx,
    pub target: Approx,
    pub upper: Approx,
    pub lower_margin: Approx,
    pub upper_margin: Approx,
}

impl BoundPoint {
    pub fn margin(&self, side: Side) -> &Approx {
        match side {
            Side::Lower => &self.lower_margin,
            Side::Upper => &self.upper_margin,
        }
    }

    pub fn witness(&self, side: Side) -> Witness {
        match side {
            Side::Lower => Witness::new(&self.r, &self.lower, &self.target),
            Side::Upper => Witness::new(&self.r, &self.target, &self.upper),
        }
    }
}

struct Pt<'a> {
    r: &'a Float,
    bits: u32,
    c: Ctx,
}

impl Pt<'_> {
    fn fv(&self, name: &str) -> Result<Approx> {
        eval_approx(&fid(name), self.r, self.bits + INNER, Path::Auto)
    }

    fn tail(&self, name: &str, k: usize) -> Result<Approx> {
        tail_approx(&fid(name), k, self.r, self.bits + INNER)
    }

    /// `s·fn - c`, through the series tail when `c` is the limit of `s·fn` at 0.
    fn gap(&self, name: &str, s: &Constant, c: &Constant) -> Result<Approx> {
        let id = fid(name);
        let wp = self.c.wp();
        if (s * &limit_at_zero(&id)?).as_ref() == Some(c) {
            let t = tail_approx(&id, 1, self.r, self.bits + INNER)?;
            Ok(&(&s.eval(wp) * &t) * self.c.x())
        } else {
            Ok(&(&s.eval(wp) * &self.fv(name)?) - &c.eval(wp))
        }
    }

    fn k(&self, c: &Constant) -> Approx {
        c.eval(self.c.wp())
    }

    fn xpow(&self, k: u32) -> Approx {
        self.c.x().powi(k)
    }
}

fn fid(name: &str) -> FunctionId {
    name.parse().expect("registered function")
}

fn one() -> Constant {
    Constant::q(1)
}

/// Lower bound and margin from a log-gap: `target = lower·e^λ`.
fn from_log_lower(target: &Approx, lower: Approx, lambda: &Approx) -> (Approx, Approx) {
    let _ = target;
    let m = &lower * &lambda.exp_m1();
    (lower, m)
}

/// Upper bound and margin from a log-gap: `upper = target·e^λ`.
fn from_log_upper(target: &Approx, upper: Approx, lambda: &Approx) -> (Approx, Approx) {
    let m = target * &lambda.exp_m1();
    (upper, m)
}

/// All quantities of `fam` at `r`, aiming at `bits` bits.
pub fn bound_point(fam: &BoundFamily, r: &Float, bits: u32) -> Result<BoundPoint> {
    if !(*r > 0 && *r < 1) {
        return Err(Error::Domain(format!(
            "modulus {} outside (0,1)",
            r.to_f64()
        )));
    }
    let wp = bits + GUARD;
    let p = Pt {
        r,
        bits,
        c: Ctx::new(Arg::from_r(r, wp)),
    };
    let c = &p.c;
    let x = c.x();
    let f0 = c.f0();
    let f1 = c.f1().clone();
    let l1x = &c.l1() * x;
    let ((lower, lower_margin), target, (upper, upper_margin)) = match fam.key {
        FamilyKey::Avv => {
            let lo = f1.sqrt().max(&(&c.two_over_pi() * &f1));
            let lm = &f0 - &lo;
            ((lo, lm), f0.clone(), (f1.clone(), &f1 - &f0))
        }
        FamilyKey::Aq => {
            let f = p.fv("f")?;
            let lam_l = &(&l1x * x) * &f;
            let lam_u = &l1x * &(&p.k(&Constant::ratio(1, 4)) - &(x * &f));
            (
                from_log_lower(&f0, f1.pow_q(&q(3, 4)), &lam_l),
                f0.clone(),
                from_log_upper(&f0, f1.clone(), &lam_u),
            )
        }
        FamilyKey::Ks
        | FamilyKey::Ineq1
        | FamilyKey::Ineq2
        | FamilyKey::Conj1
        | FamilyKey::Conj2 => exponent_family(fam, &p, &f0, &f1, &l1x)?,
        FamilyKey::KArth1 => {
            let n = fam.n;
            let at_next = Approx::rational(&seq(SequenceId::ATilde, n + 1), wp);
            let mut poly = Approx::zero(wp);
            for k in (0..=n + 1).rev() {
                poly = &(&poly * x) + &Approx::rational(&seq(SequenceId::ATilde, k), wp);
            }
            let c34 = &Constant::ratio(3, 4) - &Constant::inv_pi(2);
            let base = &f1.mul_q(&q(3, 4)) - &poly;
            let xn1 = p.xpow(n as u32 + 1);
            let p1 = &(&p.k(&c34) * &f1) - &at_next;
            let p2 = &at_next * &(&f1 - &c.one());
            let h3 = format!("h3:{n}");
            let lm = &(&xn1 * &f1) * &(&p.k(&c34) - &p.fv(&h3)?);
            let um = &(&xn1 * &f1) * &(&p.tail(&h3, 1)? * x);
            (
                (&base - &(&p1 * &xn1), lm),
                f0.clone(),
                (&base - &(&p2 * &xn1), um),
            )
        }
        FamilyKey::KArth2 => {
            let p3 = c.poly(&[(1, 1), (-1, 12), (-91, 2880)]);
            let x3 = p.xpow(3);
            let lo = &(&p3 - &(&p.k(fam.lp()) * &x3)) * &f1;
            let hi = &(&p3 - &(&p.k(fam.up()) * &x3)) * &f1;
            let two_pi = Constant::inv_pi(2);
            let lm = &(&x3 * &f1) * &(&p.gap("h4", &two_pi, fam.lp())? * &Approx::int(-1, wp));
            let um = &(&x3 * &f1) * &p.gap("h4", &two_pi, fam.up())?;
            ((lo, lm), f0.clone(), (hi, um))
        }
        FamilyKey::KArth3 => {
            let x2 = p.xpow(2);
            let bound = |d: &Constant| {
                let inner = &c.one() - &(&p.k(d) * &x2);
                &p.k(&Constant::ratio(1, 4)) + &(&inner * &f1).mul_q(&q(3, 4))
            };
            let lm = &(&x2 * &f1)
                * &(&p.gap("h3:1", &one(), &fam.lp().scale(&q(3, 4)))? * &Approx::int(-1, wp));
            let um = &(&x2 * &f1) * &p.gap("h3:1", &one(), &fam.up().scale(&q(3, 4)))?;
            ((bound(fam.lp()), lm), f0.clone(), (bound(fam.up()), um))
        }
        FamilyKey::Bound1OfK => {
            let c2 = &c.one() - &c.two_over_pi();
            let lo = &(&c.one() - &(&c2 * &c.arg.r)) * &f1;
            let inner = &(&(&c.two_over_pi() * &p.fv("h1")?) - &c.one()) + &(&c2 * &c.arg.r);
            ((lo, &f1 * &inner), f0.clone(), (f1.clone(), &f1 - &f0))
        }
        FamilyKey::EkPq => {
            let target = c.e() / c.k();
            let q0 = c.poly(&[(1, 1), (-1, 2), (-1, 16), (-1, 32)]);
            let x4 = p.xpow(4);
            let pp = &q0 - &(&x4 * &c.c(13, 32));
            let qq = &q0 - &(&x4 * &c.c(41, 2048));
            let lm = &x4 * &(&c.c(13, 32) - &p.fv("f19")?);
            let um = &x4 * &p.gap("f19", &one(), &Constant::ratio(41, 2048))?;
            ((pp, lm), target, (qq, um))
        }
        FamilyKey::F25 => {
            let rho = &c.a1() / &f1;
            let target = &c.one() - &(&c.d() / c.k());
            let f25 = p.fv("f25")?;
            let lm = &rho * &(&c.one() - &f25);
            let um = &(&rho * x) * &p.fv("f24")?.mul_q(&q(1, 4));
            (
                (&c.one() - &rho, lm),
                target,
                (&c.one() - &rho.mul_q(&q(3, 4)), um),
            )
        }
        FamilyKey::F24 => {
            let target = p.fv("f25")?;
            let f24 = p.fv("f24")?;
            let x4 = x.mul_q(&q(1, 4));
            let branch =
                &c.one() - &(&Approx::int(16, wp).ln() / &(&(&x.square() * &c.a1()) * c.k()));
            let floor = c.c(1, 40);
            let (p4, gap) = if (&floor - &branch).certainly_positive() {
                (floor, p.gap("f24", &one(), &Constant::ratio(1, 40))?)
            } else {
                let p4 = branch.max(&floor);
                let g = &f24 - &p4;
                (p4, g)
            };
            let lo = &c.c(3, 4) + &(&x4 * &p4);
            let hi = &c.c(3, 4) + &x4;
            ((lo, &x4 * &gap), target, (hi, &x4 * &(&c.one() - &f24)))
        }
    };
    Ok(BoundPoint {
        r: r.clone(),
        lower,
        target,
        upper,
        lower_margin,
        upper_margin,
    })
}

type Sided = (Approx, Approx);

/// Families of the form `c^{…}·F1^{3/4 + …}`, with margins from log-gaps.
fn exponent_family(
    fam: &BoundFamily,
    p: &Pt,
    f0: &Approx,
    f1: &Approx,
    l1x: &Approx,
) -> Result<(Sided, Approx, Sided)> {
    let c = &p.c;
    let x = c.x();
    let wp = c.wp();
    let ln_half_pi = p.k(&Constant::ln_half_pi());
    let expo = |a: Approx| f1.pow(&(&c.c(3, 4) + &a));
    let quarter = Constant::ratio(1, 4);
    Ok(match fam.key {
        FamilyKey::Ks => {
            let f = p.fv("f")?;
            let lam_l = &(l1x * x) * &(&f - &x.mul_q(&q(1, 200)));
            let lam_u = &(l1x * x) * &(&p.k(&quarter) - &f);
            (
                from_log_lower(f0, expo(x.square().mul_q(&q(1, 200))), &lam_l),
                f0.clone(),
                from_log_upper(f0, expo(x.mul_q(&q(1, 4))), &lam_u),
            )
        }
        FamilyKey::Ineq1 => {
            let lam_l = &(l1x * x) * &p.gap("f", &one(), fam.lp())?;
            let lam_u = &(l1x * x) * &(&p.gap("f", &one(), fam.up())? * &Approx::int(-1, wp));
            (
                from_log_lower(f0, expo(x * &p.k(fam.lp())), &lam_l),
                f0.clone(),
                from_log_upper(f0, expo(x * &p.k(fam.up())), &lam_u),
            )
        }
        FamilyKey::Ineq2 => {
            let g1 = p.fv("g1")?;
            let lam_l = x * &(&ln_half_pi - &g1);
            let lam_u = x * &g1;
            let lo = &(&ln_half_pi * x).mul_2exp(0) * &Approx::int(-1, wp);
            let lo = &lo.exp() * &expo(x.mul_q(&q(1, 4)));
            (
                from_log_lower(f0, lo, &lam_l),
                f0.clone(),
                from_log_upper(f0, expo(x.mul_q(&q(1, 4))), &lam_u),
            )
        }
        FamilyKey::Conj1 => {
            let e_l = &x.mul_q(&q(1, 320)) + &x.square().mul_q(&q(517, 201600));
            let e_u = &x.mul_q(&q(1, 320)) + &x.square().mul_q(&q(79, 320));
            let lam_l = &(l1x * &p.xpow(3)) * &p.tail("f", 2)?;
            let lam_u = &(l1x * &x.square()) * &(&c.c(79, 320) - &p.tail("f", 1)?);
            (
                from_log_lower(f0, expo(e_l), &lam_l),
                f0.clone(),
                from_log_upper(f0, expo(e_u), &lam_u),
            )
        }
        FamilyKey::Conj2 => {
            let x2 = x.square();
            let base = expo(x.mul_q(&q(1, 4)));
            let lo = &(&(&ln_half_pi * &x2) * &Approx::int(-1, wp)).exp() * &base;
            let hi = &(&x2.mul_q(&q(-79, 960))).exp() * &base;
            let lam_l = &x2 * &(&ln_half_pi - &p.fv("h11")?);
            let lam_u = &x2 * &p.gap("h11", &one(), &Constant::ratio(79, 960))?;
            (
                from_log_lower(f0, lo, &lam_l),
                f0.clone(),
                from_log_upper(f0, hi, &lam_u),
            )
        }
        _ => unreachable!("not an exponent family"),
    })
}

/// Value of one side of `fam` at the modulus.
pub fn bound_eval(
    fam: &BoundFamily,
    side: Side,
    m: &Modulus,
    prec: &PrecisionConfig,
) -> Result<EvalResult> {
    let pt = bound_point(fam, m.r(), prec.bits)?;
    match side {
        Side::Lower => pt.lower.to_result(prec.bits, 0),
        Side::Upper => pt.upper.to_result(prec.bits, 0),
    }
}

/// The bounded quantity at the modulus.
pub fn bound_target(fam: &BoundFamily, m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    bound_point(fam, m.r(), prec.bits)?
        .target
        .to_result(prec.bits, 0)
}

/// Outcome of checking one side at one point, with escalation.
enum Decided {
    Holds(Approx),
    Violated(BoundPoint),
    Unknown(BoundPoint),
}

fn decide(
    fam: &BoundFamily,
    side: Side,
    r: &Float,
    prec: &PrecisionConfig,
    first: &BoundPoint,
) -> Result<Decided> {
    let m = first.margin(side);
    if m.certainly_positive() {
        return Ok(Decided::Holds(m.clone()));
    }
    if m.certainly_negative() {
        return Ok(Decided::Violated(first.clone()));
    }
    let mut bits = prec.bits;
    let mut last = first.clone();
    for _ in 0..prec.max_escalations {
        bits *= prec.escalation_factor;
        let pt = bound_point(fam, r, bits)?;
        let m = pt.margin(side).clone();
        if m.certainly_positive() || m.certainly_negative() {
            let confirm = bound_point(fam, r, bits * 2)?;
            let c = confirm.margin(side);
            let agree = if m.certainly_positive() {
                c.certainly_positive()
            } else {
                c.certainly_negative()
            };
            if !agree {
                return Ok(Decided::Unknown(confirm));
            }
            return Ok(if m.certainly_positive() {
                Decided::Holds(m)
            } else {
                Decided::Violated(pt)
            });
        }
        last = pt;
    }
    Ok(Decided::Unknown(last))
}

/// Checks `lower < target < upper` with certified margins on every grid point.
pub fn check_bounds(
    fam: &BoundFamily,
    grid: &GridSpec,
    prec: &PrecisionConfig,
) -> VerificationReport {
    let kind = if fam.key.conjectural() {
        ReportKind::Conjecture
    } else {
        ReportKind::Gating
    };
    check_bounds_as(fam, grid, prec, &format!("bound/{fam}"), kind)
}

pub fn check_bounds_as(
    fam: &BoundFamily,
    grid: &GridSpec,
    prec: &PrecisionConfig,
    claim_id: &str,
    kind: ReportKind,
) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new(claim_id, kind, prec.bits).with_grid(grid);
    let pts = grid.points();
    let results = crate::par::map(&pts, |r| -> Result<Vec<(Side, Decided)>> {
        let first = bound_point(fam, r, prec.bits)?;
        let mut out = Vec::with_capacity(2);
        for side in [Side::Lower, Side::Upper] {
            out.push((side, decide(fam, side, r, prec, &first)?));
        }
        Ok(out)
    });
    let mut mm = MinMargin::default();
    'outer: for (r, res) in pts.iter().zip(results) {
        match res {
            Err(e) => {
                rep.status = Status::Fail;
                rep.note = Some(format!("evaluation failed at r={}: {e}", r.to_f64()));
                break;
            }
            Ok(sides) => {
                for (side, d) in sides {
                    match d {
                        Decided::Holds(m) => mm.see(&m, || format!("r={} ({side:?})", r.to_f64())),
                        Decided::Violated(pt) => {
                            rep.fail(pt.witness(side));
                            rep.note = Some(format!("{side:?} bound violated"));
                            break 'outer;
                        }
                        Decided::Unknown(pt) => {
                            rep.fail(pt.witness(side));
                            rep.note =
                                Some(format!("indeterminate {side:?} margin after escalation"));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    mm.write(&mut rep);
    rep.set_elapsed(start.elapsed());
    rep
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Sharpness {
    /// The perturbed inequality fails at `r`.
    Witness {
        r: String,
        margin: String,
        crossing: Option<String>,
    },
    /// No violation reachable at this precision.
    NotReachable { points_searched: usize },
}

impl Sharpness {
    pub fn witness_r(&self) -> Option<f64> {
        match self {
            Sharpness::Witness { r, .. } => r.parse().ok(),
            Sharpness::NotReachable { .. } => None,
        }
    }
}

/// Scan order: a coarse pass `0.1, …, 0.9`, then `2^-k` and `1 - 2^-k` for
/// `k ≤ p/2`.
fn sharpness_points(bits: u32) -> Vec<Float> {
    let mut v: Vec<Float> = (1..=9).map(|i| Float::with_val(bits, i) / 10u32).collect();
    for k in 1..=bits / 2 {
        let t = Float::with_val(bits, 1) >> k;
        v.push(t.clone());
        v.push(Float::with_val(bits, 1) - t);
    }
    v
}

/// Searches for a point violating `fam` with the `side` constant shifted by
/// `perturbation`.
pub fn sharpness_witness(
    fam: &BoundFamily,
    side: Side,
    perturbation: &Rational,
    prec: &PrecisionConfig,
) -> Result<Sharpness> {
    let pf = fam.perturbed(side, perturbation)?;
    let bits = prec.bits;
    let pts = sharpness_points(bits);
    let mut prev_ok: Option<Float> = None;
    for r in &pts {
        let pt = bound_point(&pf, r, bits)?;
        let m = pt.margin(side);
        if m.certainly_negative() {
            let holds = match prev_ok {
                Some(a) => Some(a),
                None => first_holding(&pf, side, &pts[..9], bits)?,
            };
            let crossing = match holds {
                Some(a) => Some(float_to_decimal(&bisect_crossing(&pf, side, &a, r, bits)?)),
                None => None,
            };
            return Ok(Sharpness::Witness {
                r: float_to_decimal(r),
                margin: m.value().to_string_radix(10, Some(12)),
                crossing,
            });
        }
        if m.certainly_positive() && (prev_ok.is_none() || is_coarse(r)) {
            prev_ok = Some(r.clone());
        }
    }
    Ok(Sharpness::NotReachable {
        points_searched: pts.len(),
    })
}

fn first_holding(fam: &BoundFamily, side: Side, pts: &[Float], bits: u32) -> Result<Option<Float>> {
    for r in pts {
        if bound_point(fam, r, bits)?.margin(side).certainly_positive() {
            return Ok(Some(r.clone()));
        }
    }
    Ok(None)
}

fn is_coarse(r: &Float) -> bool {
    let t = Float::with_val(64, r * 10u32);
    t.is_integer()
}

/// Locates the sign change of the margin between `a` (holds) and `b` (fails).
fn bisect_crossing(
    fam: &BoundFamily,
    side: Side,
    a: &Float,
    b: &Float,
    bits: u32,
) -> Result<Float> {
    let (mut lo, mut hi) = (a.clone(), b.clone());
    for _ in 0..40 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        let m = bound_point(fam, &mid, bits)?.margin(side).clone();
        if m.certainly_negative() {
            hi = mid;
        } else if m.certainly_positive() {
            lo = mid;
        } else {
            break;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug)]
pub struct Crossover {
    pub r0: Float,
    /// `|arth(r0)/r0 - (π/2)^{320/79}|`
    pub residual: Float,
}

/// The root of `arth(r)/r = (π/2)^{320/79}`, by bisection at `p + 64` bits.
pub fn crossover_r0(prec: &PrecisionConfig) -> Result<Crossover> {
    let wp = prec.bits + 64;
    let target = Approx::pi(wp).mul_2exp(-1).pow_q(&q(320, 79));
    let f1 = |r: &Float| Ctx::new(Arg::from_r(r, wp + 32)).f1().clone();
    let mut lo = Float::with_val(wp, 1) >> 1;
    let mut hi = Float::with_val(wp, 1) - (Float::with_val(wp, 1) >> (wp / 2));
    if !(&f1(&hi) - &target).certainly_positive() {
        return Err(Error::PrecisionExhausted {
            bits: wp,
            what: "root not bracketed".into(),
        });
    }
    for _ in 0..wp {
        let mid = Float::with_val(wp, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let d = &f1(&mid) - &target;
        match d.sign() {
            Some(std::cmp::Ordering::Less) => lo = mid,
            Some(_) => hi = mid,
            None => {
                lo = mid;
                break;
            }
        }
    }
    let d = &f1(&lo) - &target;
    let residual = Float::with_val(64, d.value().abs_ref()) + d.err();
    Ok(Crossover { r0: lo, residual })
}

/// Interval endpoints `(lo, hi)` with the sign held on every sampled point.
#[derive(Clone, Debug, Serialize)]
pub struct SignInterval {
    pub lo: f64,
    pub hi: f64,
    pub positive: bool,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignScan {
    pub target: String,
    pub near_zero: SignInterval,
    pub near_one: SignInterval,
}

/// Finds a leading and a trailing interval on which `target` keeps a
/// certified sign, for `h9` and `h10`.
pub fn sign_change_scan(target: &FunctionId, prec: &PrecisionConfig) -> Result<SignScan> {
    let grid = GridSpec::composite(3000)?;
    let pts = grid.points();
    let vals = crate::par::map(&pts, |r| eval_approx(target, r, prec.bits, Path::Auto));
    let mut signs = Vec::with_capacity(pts.len());
    for v in vals {
        signs.push(v?.sign());
    }
    let run = |idx: &mut dyn Iterator<Item = usize>| -> Result<SignInterval> {
        let mut first: Option<(usize, std::cmp::Ordering)> = None;
        let mut last = 0usize;
        let mut count = 0usize;
        for i in idx {
            match (first, signs[i]) {
                (None, Some(s)) => {
                    first = Some((i, s));
                    last = i;
                    count = 1;
                }
                (Some((_, s0)), Some(s)) if s == s0 => {
                    last = i;
                    count += 1;
                }
                _ => break,
            }
        }
        let (i0, s) = first.ok_or(Error::PrecisionExhausted {
            bits: prec.bits,
            what: "no certified sign".into(),
        })?;
        let (a, b) = (pts[i0.min(last)].to_f64(), pts[i0.max(last)].to_f64());
        Ok(SignInterval {
            lo: a,
            hi: b,
            positive: s.is_gt(),
            samples: count,
        })
    };
    let near_zero = run(&mut (0..pts.len()))?;
    let near_one = run(&mut (0..pts.len()).rev())?;
    Ok(SignScan {
        target: target.to_string(),
        near_zero,
        near_one,
    })
}
