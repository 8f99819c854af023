use rug::Rational;
use serde::Serialize;

use super::claims::{ClaimSet, Convexity, Monotone, Sign};
use super::id::{FnName, FunctionId};
use super::series_rep::{Var, V_SWITCH};
use crate::constant::{Constant, Endpoint};
use crate::exact::{seq, SequenceId};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn fin(c: Constant) -> Endpoint {
    Endpoint::Finite(c)
}

fn rat(n: i64, d: i64) -> Endpoint {
    fin(Constant::ratio(n, d))
}

fn pi(n: i64, d: i64) -> Endpoint {
    fin(Constant::pi(q(n, d)))
}

fn log_half_pi() -> Endpoint {
    fin(Constant::ln_half_pi())
}

/// The claims attached to `id`.
pub fn fn_claims(id: &FunctionId) -> ClaimSet {
    use Endpoint::PosInf;
    let inc = ClaimSet::increasing;
    let dec = ClaimSet::decreasing;
    match id.name() {
        FnName::F(1) => inc(rat(2, 3), rat(1, 1)).with_convexity(Convexity::Convex),
        FnName::F(2) => inc(rat(2, 3), PosInf),
        FnName::F(3) => dec(rat(0, 1), rat(1, 2)),
        FnName::F(4) => inc(fin(Constant::inv_pi(q(8, 3))), rat(2, 1)),
        FnName::F(5) => inc(rat(2, 1), PosInf).with_convexity(Convexity::Convex),
        FnName::F(6) => inc(rat(2, 1), PosInf),
        FnName::F(7) => ClaimSet {
            conjectured_abs_monotone: true,
            ..inc(rat(1, 3), PosInf)
        },
        FnName::F(8) | FnName::F(9) => dec(rat(0, 1), rat(1, 2)),
        FnName::F(10) => ClaimSet::sign(Sign::Positive, Constant::ratio(25688, 105)),
        FnName::F(11) => ClaimSet::sign(Sign::Positive, Constant::ratio(14, 15)),
        FnName::F(12) => ClaimSet::sign(Sign::Negative, Constant::ratio(-8, 3)),
        FnName::F(13) => ClaimSet::abs_monotone(rat(8, 105)),
        FnName::F(14) => ClaimSet::abs_monotone(rat(26, 15)),
        FnName::F(15) => inc(rat(1, 1), pi(1, 2)),
        FnName::F(16) => inc(rat(1, 1), pi(3, 8)),
        FnName::F(17) => inc(
            rat(1, 4),
            fin(Constant::term(2, -1, crate::constant::LogFactor::Ln2)),
        ),
        FnName::F(18) => ClaimSet::abs_monotone(pi(41, 4096)),
        FnName::F(19) => inc(rat(41, 2048), rat(13, 32)),
        FnName::F(20) => inc(rat(0, 1), fin(Constant::ln2())).with_convexity(Convexity::Convex),
        FnName::F(21) => inc(rat(0, 1), PosInf).with_convexity(Convexity::Convex),
        FnName::F(22) => inc(pi(1, 30), rat(1, 1)),
        FnName::F(23) => dec(rat(1, 1), pi(4, 3)),
        FnName::F(24) => inc(rat(1, 40), rat(1, 1)),
        FnName::F(25) => inc(rat(3, 4), rat(1, 1)),
        FnName::F(_) => ClaimSet::empty(),
        FnName::G => {
            let c = id.param().expect("validated");
            if *c >= q(1, 4) {
                let hi = if *c == q(1, 4) { log_half_pi() } else { PosInf };
                inc(rat(0, 1), hi).with_convexity(Convexity::Convex)
            } else if *c <= q(1, 320) {
                dec(Endpoint::NegInf, rat(0, 1)).with_convexity(Convexity::Concave)
            } else {
                ClaimSet::empty()
            }
        }
        FnName::Gn(1) => inc(rat(0, 1), log_half_pi()),
        FnName::Gn(2) => dec(rat(0, 1), rat(79, 320)),
        FnName::Gn(3) => inc(rat(0, 1), rat(79, 320)),
        FnName::Gn(4) => inc(rat(0, 1), PosInf),
        FnName::Gn(_) => ClaimSet::empty(),
        FnName::SmallF => ClaimSet {
            conjectured_convexity: Convexity::Convex,
            conjectured_abs_monotone: true,
            ..inc(rat(1, 320), rat(1, 4))
        },
        FnName::BigG => ClaimSet {
            conjectured_abs_monotone: true,
            ..inc(rat(3, 4), rat(1, 1))
        },
        FnName::H(1) => dec(rat(1, 1), pi(1, 2)).with_convexity(Convexity::Concave),
        FnName::H(2) => {
            ClaimSet::abs_monotone(fin(Constant::q(seq(SequenceId::ATilde, id.n() + 1))))
        }
        FnName::H(3) => inc(
            fin(Constant::q(seq(SequenceId::ATilde, id.n() + 1))),
            fin(&Constant::ratio(3, 4) - &Constant::inv_pi(2)),
        ),
        FnName::H(4) => inc(
            pi(871, 96768),
            fin(&Constant::pi(q(2549, 5760)) - &Constant::q(1)),
        ),
        FnName::H(5) => inc(fin(Constant::inv_pi(2)), PosInf),
        FnName::H(6) => dec(fin(&Constant::q(1) + &Constant::pi(q(331, 5760))), pi(1, 2)),
        FnName::H(7) => dec(rat(0, 1), fin(&Constant::q(1) - &Constant::inv_pi(2))),
        FnName::H(8) => ClaimSet::sign(Sign::Positive, Constant::zero()),
        FnName::H(9) | FnName::H(10) => ClaimSet::empty(),
        FnName::H(11) => ClaimSet {
            conjectured_abs_monotone: true,
            ..inc(rat(79, 960), log_half_pi())
                .with_convexity(Convexity::Convex)
                .conjecture()
        },
        FnName::H(12) => ClaimSet {
            conjectured_abs_monotone: true,
            ..inc(rat(517, 604800), PosInf)
                .with_convexity(Convexity::Convex)
                .conjecture()
        },
        FnName::H(13) => ClaimSet {
            conjectured_abs_monotone: true,
            ..ClaimSet::empty()
        },
        FnName::H(_) => ClaimSet::empty(),
    }
}

/// Which group of results a function belongs to.
pub fn group(name: FnName) -> &'static str {
    match name {
        FnName::F(1..=14) => "arth combinations",
        FnName::F(15..=17) => "hypergeometric ratios in x",
        FnName::F(18..=25) => "K and E combinations",
        FnName::G | FnName::Gn(_) | FnName::SmallF | FnName::BigG => "exponent of arth(r)/r",
        FnName::H(1..=4) => "K against arth(r)/r",
        FnName::H(5..=10) => "bound comparisons",
        _ => "conjectured expansions",
    }
}

/// Whether the argument is `x` itself rather than `r`.
pub fn argument_is_x(name: FnName) -> bool {
    matches!(name, FnName::F(15..=17))
}

pub fn series_var(name: FnName) -> Var {
    match name {
        FnName::H(7) | FnName::H(8) => Var::R,
        _ => Var::X,
    }
}

/// Largest argument at which the automatic path uses the series.
pub fn switch_radius(name: FnName) -> f64 {
    if argument_is_x(name) || series_var(name) == Var::R {
        V_SWITCH
    } else {
        V_SWITCH.sqrt()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegistryEntry {
    pub id: FunctionId,
    pub name: String,
    /// `none`, `c` (positive rational) or `n` (integer ≥ 1).
    pub param: &'static str,
    pub group: &'static str,
    pub switch_radius: f64,
    pub claims: ClaimSet,
}

/// Every registered function; parametrised names appear once per listed parameter.
pub fn list_functions() -> Vec<RegistryEntry> {
    let mut ids = Vec::new();
    for name in FnName::all() {
        match name {
            FnName::G => {
                for c in [q(1, 320), q(1, 4), q(1, 1)] {
                    ids.push(FunctionId::new(name, Some(c)).expect("valid"));
                }
            }
            FnName::H(2) | FnName::H(3) => {
                ids.push(FunctionId::new(name, Some(q(1, 1))).expect("valid"))
            }
            _ => ids.push(FunctionId::plain(name)),
        }
    }
    ids.into_iter()
        .map(|id| RegistryEntry {
            name: id.name().to_string(),
            param: match id.name() {
                FnName::G => "c",
                FnName::H(2) | FnName::H(3) => "n",
                _ => "none",
            },
            group: group(id.name()),
            switch_radius: switch_radius(id.name()),
            claims: fn_claims(&id),
            id,
        })
        .collect()
}

/// Ids carrying a proven monotone claim.
pub fn monotone_ids() -> Vec<FunctionId> {
    list_functions()
        .into_iter()
        .filter(|e| e.claims.monotone != Monotone::None && !e.claims.conjectural)
        .map(|e| e.id)
        .collect()
}
