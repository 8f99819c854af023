//! The named functions of `r` (or of `x = r²`) built from K, E and
//! arth(r)/r, with exact series near 0 and closed forms elsewhere.

pub mod claims;
pub(crate) mod direct;
pub mod id;
pub mod registry;
pub mod series_rep;

use rug::Float;

pub use claims::{ClaimSet, Convexity, Monotone, Sign, StrictSign};
pub use id::{FnName, FunctionId};
pub use registry::{fn_claims, list_functions, RegistryEntry};
pub use series_rep::{SeriesRep, Var, SERIES_GUARD, V_SWITCH};

use crate::approx::{Approx, EvalResult};
use crate::constant::Constant;
use crate::ell::{Arg, Modulus};
use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;

/// Guard bits of the closed-form path away from 0.
pub const DIRECT_GUARD: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Path {
    #[default]
    Auto,
    Series,
    Direct,
}

/// Power of the series variable divided out by the closed form.
fn cancellation(id: &FunctionId) -> u32 {
    match id.name() {
        FnName::H(2) | FnName::H(3) => id.n() as u32 + 2,
        FnName::F(18) | FnName::F(19) | FnName::F(24) | FnName::F(22) => 5,
        FnName::H(4) | FnName::F(13) | FnName::H(12) | FnName::Gn(3) | FnName::Gn(4) => 4,
        _ => 3,
    }
}

/// The series variable at `r`.
fn series_v(id: &FunctionId, r: &Float) -> Float {
    if registry::argument_is_x(id.name()) || registry::series_var(id.name()) == Var::R {
        r.clone()
    } else {
        Float::with_val(r.prec() * 2, r.square_ref())
    }
}

fn arg_at(id: &FunctionId, r: &Float, wp: u32) -> Arg {
    if registry::argument_is_x(id.name()) {
        Arg::from_x(r, wp)
    } else {
        Arg::from_r(r, wp)
    }
}

fn uses_series(id: &FunctionId, r: &Float, path: Path) -> bool {
    match path {
        Path::Series => true,
        Path::Direct => false,
        Path::Auto => series_v(id, r).to_f64() <= V_SWITCH,
    }
}

fn direct_approx(id: &FunctionId, r: &Float, bits: u32) -> Result<Approx> {
    let v = series_v(id, r).to_f64();
    let depth = if v > 0.0 {
        (-v.log2()).ceil().max(0.0) as u32
    } else {
        0
    };
    let guard = DIRECT_GUARD + cancellation(id) * depth;
    let ctx = direct::Ctx::new(arg_at(id, r, bits + guard));
    direct::eval(id, &ctx)
}

fn series_approx(id: &FunctionId, tail: usize, r: &Float, bits: u32) -> Result<Approx> {
    let arg = arg_at(id, r, bits + SERIES_GUARD);
    let v = match registry::series_var(id.name()) {
        Var::R => arg.r.clone(),
        Var::X => arg.x.clone(),
    };
    series_rep::eval(id, tail, &v, &arg.r)
}

/// Value of `id` at `r` as a ball, aiming at `bits` correct bits.
pub fn eval_approx(id: &FunctionId, r: &Float, bits: u32, path: Path) -> Result<Approx> {
    if !(*r > 0 && *r < 1) {
        return Err(Error::Domain(format!(
            "argument {} outside (0,1)",
            r.to_f64()
        )));
    }
    if uses_series(id, r, path) {
        series_approx(id, 0, r, bits)
    } else {
        direct_approx(id, r, bits)
    }
}

/// `(fn - Σ_{j<k} c_j v^j) / v^k` where `c_j` are the Maclaurin coefficients
/// in the series variable `v`.
pub fn tail_approx(id: &FunctionId, k: usize, r: &Float, bits: u32) -> Result<Approx> {
    if k == 0 {
        return eval_approx(id, r, bits, Path::Auto);
    }
    if uses_series(id, r, Path::Auto) {
        return series_approx(id, k, r, bits);
    }
    let v = series_v(id, r).to_f64();
    let extra = k as u32 * (-v.log2()).ceil().max(0.0) as u32;
    let full = direct_approx(id, r, bits + extra)?;
    let wp = full.prec();
    let rep = series_rep::rep(id, 0, k)?;
    if rep.pre_r > 0 {
        return Err(Error::InvalidSeries(format!("{id} has no tail form")));
    }
    let arg = arg_at(id, r, wp);
    let vv = match rep.var {
        Var::R => arg.r,
        Var::X => arg.x,
    };
    let mut poly = Approx::zero(wp);
    for j in (0..k).rev() {
        poly = &(&poly * &vv) + &rep.coeff(j).eval(wp);
    }
    Ok(&(&full - &poly) / &vv.powi(k as u32))
}

/// Certified value at the modulus, automatic path.
pub fn fn_eval(id: &FunctionId, m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    fn_eval_path(id, m, prec, Path::Auto)
}

pub fn fn_eval_path(
    id: &FunctionId,
    m: &Modulus,
    prec: &PrecisionConfig,
    path: Path,
) -> Result<EvalResult> {
    let a = eval_approx(id, m.r(), prec.bits, path)?;
    a.to_result(prec.bits, 0)
}

/// The exact value at `r → 0⁺`.
pub fn limit_at_zero(id: &FunctionId) -> Result<Constant> {
    Ok(series_rep::rep(id, 0, 8)?.limit_at_zero())
}

/// The first `n` Maclaurin coefficients in the series variable, together
/// with the variable and the power of `r` in front.
pub fn fn_coeffs(id: &FunctionId, n: usize) -> Result<(Var, u32, Vec<Constant>)> {
    let rep = series_rep::rep(id, 0, n)?;
    Ok((rep.var, rep.pre_r, (0..n).map(|j| rep.coeff(j)).collect()))
}
