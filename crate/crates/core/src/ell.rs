//! Complete elliptic integrals K and E, arth(r)/r and the hypergeometric
//! building blocks F0, F1, G0, G1.
//!
//! Below `x = r² = 1/2` everything is summed from the Gauss series; above it
//! K and E come from the arithmetic-geometric mean and arth(r)/r from its
//! logarithmic form.

use rug::{Float, Integer, Rational};

use crate::approx::{Approx, EvalResult, ERR_PREC};
use crate::error::{Error, Result};
use crate::precision::PrecisionConfig;

/// Extra bits carried by the public entry points of this module.
pub const GUARD_BITS: u32 = 32;

/// Series are used for `x <= X_SWITCH`.
pub const X_SWITCH: f64 = 0.5;

/// Term cap per precision bit.
pub const TERMS_PER_BIT: usize = 64;

/// A modulus `r` in (0,1) together with its complement.
#[derive(Clone, Debug, PartialEq)]
pub struct Modulus {
    r: Float,
    rp: Float,
}

impl Modulus {
    pub fn new(r: Float) -> Result<Self> {
        if !(r > 0 && r < 1) {
            return Err(Error::Domain(format!(
                "modulus {} outside (0,1)",
                r.to_f64()
            )));
        }
        let p = r.prec() + 64;
        let one = Float::with_val(p, 1);
        let rp2 = Float::with_val(p, &one - &r) * Float::with_val(p, &one + &r);
        let rp = rp2.sqrt();
        Ok(Modulus { r, rp })
    }

    pub fn from_f64(r: f64, bits: u32) -> Result<Self> {
        Self::new(Float::with_val(bits, r))
    }

    /// Parses a decimal string rounded once at `bits`.
    pub fn parse(s: &str, bits: u32) -> Result<Self> {
        Self::new(crate::approx::parse_decimal(s, bits)?)
    }

    pub fn r(&self) -> &Float {
        &self.r
    }

    pub fn rp(&self) -> &Float {
        &self.rp
    }

    /// The complementary modulus as a modulus in its own right.
    pub fn complement(&self) -> Result<Self> {
        Self::new(self.rp.clone())
    }
}

/// The argument of a function in the three forms formulas need: `r`, `x = r²`
/// and `r'² = 1 - x`, each at working precision.
#[derive(Clone, Debug)]
pub struct Arg {
    pub r: Approx,
    pub x: Approx,
    pub rp2: Approx,
}

impl Arg {
    pub fn from_r(r: &Float, wp: u32) -> Self {
        let r = Approx::exact(r.clone()).set_prec(wp);
        let x = r.square();
        let one = Approx::one(wp);
        let rp2 = &(&one - &r) * &(&one + &r);
        Arg { r, x, rp2 }
    }

    /// Argument given directly as `x`, for functions of `x` on (0,1).
    pub fn from_x(x: &Float, wp: u32) -> Self {
        let x = Approx::exact(x.clone()).set_prec(wp);
        let r = x.sqrt();
        let rp2 = &Approx::one(wp) - &x;
        Arg { r, x, rp2 }
    }

    pub fn wp(&self) -> u32 {
        self.x.prec()
    }

    pub fn series_side(&self) -> bool {
        self.x.value().to_f64() <= X_SWITCH
    }

    /// The complementary argument, `r ↔ r'`.
    pub fn complement(&self) -> Self {
        Arg {
            r: self.rp2.sqrt(),
            x: self.rp2.clone(),
            rp2: self.x.clone(),
        }
    }
}

struct Param {
    num: i64,
    den: i64,
}

impl Param {
    fn new(q: &Rational) -> Result<Self> {
        let num = q
            .numer()
            .to_i64()
            .ok_or_else(|| Error::ParamOutOfRange(q.to_string()))?;
        let den = q
            .denom()
            .to_i64()
            .ok_or_else(|| Error::ParamOutOfRange(q.to_string()))?;
        if num.unsigned_abs() > 1 << 20 || den > 1 << 20 {
            return Err(Error::ParamOutOfRange(format!("parameter {q} too large")));
        }
        Ok(Param { num, den })
    }

    /// `den·(q + n)`
    fn shifted(&self, n: i64) -> i128 {
        self.num as i128 + n as i128 * self.den as i128
    }

    fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn mul_ratio(t: &mut Float, num: i128, den: i128) {
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(n), Ok(d)) => {
            *t *= n;
            *t /= d;
        }
        _ => {
            *t *= Integer::from(num);
            *t /= Integer::from(den);
        }
    }
}

/// `₂F₁(a,b;c;x)` with an explicit term cap.
pub fn hyp_approx(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    x: &Approx,
    cap: usize,
) -> Result<(Approx, usize)> {
    if c.denom() == &1u32 && c.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::ParamOutOfRange(format!(
            "c = {c} is a nonpositive integer"
        )));
    }
    let wp = x.prec();
    let xv = x.value();
    if xv.is_sign_negative() && !xv.is_zero() || *xv >= 1 {
        return Err(Error::Domain(format!(
            "hypergeometric argument {} outside [0,1)",
            xv.to_f64()
        )));
    }
    let (pa, pb, pc) = (Param::new(a)?, Param::new(b)?, Param::new(c)?);
    if xv.is_zero() {
        let d = Float::with_val(ERR_PREC, &(Rational::from(a * b) / c));
        let e = Float::with_val(ERR_PREC, d.abs() * x.err());
        return Ok((Approx::with_err(Float::with_val(wp, 1), e), 1));
    }
    let x_hi = xv.to_f64() * (1.0 + 1e-15);
    let lowest = -[pa.to_f64(), pb.to_f64(), pc.to_f64()]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let positive_from = lowest.max(0.0).ceil() as i64 + 1;
    let excess = (pa.to_f64() + pb.to_f64() - pc.to_f64() - 1.0).max(0.0);
    let ab_c = (pa.to_f64() * pb.to_f64() - pc.to_f64()).max(0.0);

    let mut t = Float::with_val(wp, 1);
    let mut sum = Float::with_val(wp, 1);
    let mut abs_sum = Float::with_val(ERR_PREC, 1);
    let mut moment = Float::with_val(ERR_PREC, 0);
    let eps = {
        let mut e = Float::with_val(ERR_PREC, 1);
        e >>= wp as i32;
        e
    };
    for n in 0..cap as i64 {
        let num = pa.shifted(n) * pb.shifted(n) * pc.den as i128;
        let den = pc.shifted(n) * pa.den as i128 * pb.den as i128 * (n as i128 + 1);
        if num == 0 {
            let rounding = Float::with_val(ERR_PREC, &abs_sum * &eps) * (4 * (n + 2));
            let dx = Float::with_val(ERR_PREC, &moment / xv) * x.err();
            let e = Float::with_val(ERR_PREC, rounding + dx);
            return Ok((Approx::with_err(sum, e), n as usize + 1));
        }
        t *= xv;
        mul_ratio(&mut t, num, den);
        sum += &t;
        let ta = Float::with_val(ERR_PREC, t.abs_ref());
        abs_sum += &ta;
        moment += Float::with_val(ERR_PREC, &ta * (n + 1));
        let m = n + 1;
        if m >= positive_from {
            let ratio_now = (pa.to_f64() + m as f64) * (pb.to_f64() + m as f64)
                / ((pc.to_f64() + m as f64) * (m as f64 + 1.0));
            let dev = excess / (pc.to_f64() + m as f64)
                + ab_c / ((pc.to_f64() + m as f64) * (m as f64 + 1.0));
            let rho = x_hi * ratio_now.max(1.0 + dev) * (1.0 + 1e-12);
            if rho < 1.0 && rho <= x_hi + 2f64.powi(-20) {
                let tail = Float::with_val(ERR_PREC, &ta * (rho / (1.0 - rho)));
                let target = Float::with_val(ERR_PREC, sum.abs_ref()) * &eps;
                if tail <= target {
                    let rounding = Float::with_val(ERR_PREC, &abs_sum * &eps) * (4 * (n + 2));
                    let dx = Float::with_val(ERR_PREC, &moment / xv) * x.err();
                    let e = Float::with_val(ERR_PREC, tail + rounding) + dx;
                    return Ok((Approx::with_err(sum, e), n as usize + 2));
                }
            }
        }
    }
    Err(Error::NonConvergent { terms: cap })
}

fn default_cap(wp: u32) -> usize {
    TERMS_PER_BIT * wp as usize
}

fn half() -> Rational {
    Rational::from((1, 2))
}

/// Arithmetic-geometric mean; also returns `Σ 2^(n-1) c_n²` (n ≥ 1) for E.
fn agm_with_sum(a0: &Approx, b0: &Approx) -> (Approx, Float, usize) {
    let wp = a0.prec().max(b0.prec());
    let mut a = Float::with_val(wp, a0.value());
    let mut b = Float::with_val(wp, b0.value());
    let mut s = Float::new(wp);
    let mut w = Float::with_val(wp, 1);
    w >>= 1;
    let mut iters = 0usize;
    loop {
        let gap = Float::with_val(wp, &a - &b).abs();
        let mut tol = Float::with_val(wp, &a);
        tol >>= wp as i32 - 4;
        if gap <= tol || iters > 4 * wp as usize {
            let rel_in = {
                let ea = Float::with_val(ERR_PREC, a0.err() / a0.value());
                let eb = Float::with_val(ERR_PREC, b0.err() / b0.value());
                ea.max(&eb)
            };
            let mut round = Float::with_val(ERR_PREC, &a);
            round >>= wp as i32;
            round *= 4 * (iters as u32 + 1);
            let e =
                Float::with_val(ERR_PREC, &gap + &round) + Float::with_val(ERR_PREC, &rel_in * &a);
            return (Approx::with_err(a, e), s, iters);
        }
        let c = Float::with_val(wp, &gap / 2u32);
        w <<= 1;
        s += Float::with_val(wp, c.square_ref()) * &w;
        let an = Float::with_val(wp, &a + &b) / 2u32;
        b = Float::with_val(wp, &a * &b).sqrt();
        a = an;
        iters += 1;
    }
}

/// `agm(a0, b0)` for positive inputs.
pub fn agm_approx(a0: &Approx, b0: &Approx) -> (Approx, usize) {
    let (m, _, n) = agm_with_sum(a0, b0);
    (m, n)
}

/// K and E together through the AGM.
pub(crate) fn ke_agm(arg: &Arg) -> (Approx, Approx, usize) {
    let wp = arg.wp();
    let rp = arg.rp2.sqrt();
    let (m, s, iters) = agm_with_sum(&Approx::one(wp), &rp);
    let pi = Approx::pi(wp);
    let k = &pi / &m.mul_2exp(1);
    let mut es = Float::with_val(ERR_PREC, s.abs_ref()) + 1;
    es >>= wp as i32;
    es *= 8 * (iters as u32 + 2);
    let s = Approx::with_err(s, es);
    let one_minus = &(&Approx::one(wp) - &arg.x.mul_2exp(-1)) - &s;
    let e = &k * &one_minus;
    (k, e, iters)
}

pub fn k_approx(arg: &Arg) -> Result<(Approx, usize)> {
    let wp = arg.wp();
    if arg.series_side() {
        let (f, n) = hyp_approx(
            &half(),
            &half(),
            &Rational::from(1),
            &arg.x,
            default_cap(wp),
        )?;
        Ok((&f * &Approx::pi(wp).mul_2exp(-1), n))
    } else {
        let (k, _, n) = ke_agm(arg);
        Ok((k, n))
    }
}

pub fn e_approx(arg: &Arg) -> Result<(Approx, usize)> {
    let wp = arg.wp();
    if arg.series_side() {
        let (f, n) = hyp_approx(
            &-half(),
            &half(),
            &Rational::from(1),
            &arg.x,
            default_cap(wp),
        )?;
        Ok((&f * &Approx::pi(wp).mul_2exp(-1), n))
    } else {
        let (_, e, n) = ke_agm(arg);
        Ok((e, n))
    }
}

/// `arth(r)/r`
pub fn f1_approx(arg: &Arg) -> Result<(Approx, usize)> {
    let wp = arg.wp();
    if arg.series_side() {
        hyp_approx(
            &half(),
            &Rational::from(1),
            &Rational::from((3, 2)),
            &arg.x,
            default_cap(wp),
        )
    } else {
        let one = Approx::one(wp);
        let q = &(&one + &arg.r).square() / &arg.rp2;
        Ok((&q.ln() / &arg.r.mul_2exp(1), 0))
    }
}

/// `(E - r'²K)/r²`
pub fn d_approx(arg: &Arg) -> Result<(Approx, usize)> {
    let wp = arg.wp();
    if arg.series_side() {
        let (g0, n) = hyp_approx(
            &half(),
            &half(),
            &Rational::from(2),
            &arg.x,
            default_cap(wp),
        )?;
        Ok((&g0 * &Approx::pi(wp).mul_2exp(-2), n))
    } else {
        let (k, e, n) = ke_agm(arg);
        Ok((&(&e - &(&arg.rp2 * &k)) / &arg.x, n))
    }
}

/// `G1(x) = ₂F₁(1/2,1;5/2;x)`
pub fn g1_approx(arg: &Arg) -> Result<(Approx, usize)> {
    let wp = arg.wp();
    if arg.series_side() {
        hyp_approx(
            &half(),
            &Rational::from(1),
            &Rational::from((5, 2)),
            &arg.x,
            default_cap(wp),
        )
    } else {
        let (f1, n) = f1_approx(arg)?;
        let a1 = &(&Approx::one(wp) - &(&arg.rp2 * &f1)) / &arg.x;
        Ok((a1.mul_q(&Rational::from((3, 2))), n))
    }
}

/// `G0(x) = ₂F₁(1/2,1/2;2;x) = 4D/π`
pub fn g0_approx(arg: &Arg) -> Result<(Approx, usize)> {
    let wp = arg.wp();
    if arg.series_side() {
        hyp_approx(
            &half(),
            &half(),
            &Rational::from(2),
            &arg.x,
            default_cap(wp),
        )
    } else {
        let (d, n) = d_approx(arg)?;
        Ok((&d.mul_2exp(2) / &Approx::pi(wp), n))
    }
}

fn wp_of(prec: &PrecisionConfig) -> u32 {
    prec.bits + GUARD_BITS
}

/// `₂F₁(a,b;c;x)` to relative accuracy `2^-p`.
pub fn hyp_series(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    x: &Float,
    prec: &PrecisionConfig,
) -> Result<EvalResult> {
    hyp_series_capped(a, b, c, x, prec, TERMS_PER_BIT * prec.bits as usize)
}

pub fn hyp_series_capped(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    x: &Float,
    prec: &PrecisionConfig,
    cap: usize,
) -> Result<EvalResult> {
    let xa = Approx::exact(x.clone()).set_prec(wp_of(prec));
    let (v, n) = hyp_approx(a, b, c, &xa, cap)?;
    v.to_result(prec.bits, n)
}

pub fn agm(a0: &Float, b0: &Float, prec: &PrecisionConfig) -> Result<EvalResult> {
    if !(*a0 > 0 && *b0 > 0) {
        return Err(Error::Domain("agm needs positive arguments".into()));
    }
    let wp = wp_of(prec);
    let (m, n) = agm_approx(
        &Approx::exact(a0.clone()).set_prec(wp),
        &Approx::exact(b0.clone()).set_prec(wp),
    );
    m.to_result(prec.bits, n)
}

fn public(
    m: &Modulus,
    prec: &PrecisionConfig,
    f: impl Fn(&Arg) -> Result<(Approx, usize)>,
) -> Result<EvalResult> {
    let arg = Arg::from_r(m.r(), wp_of(prec));
    let (v, n) = f(&arg)?;
    v.to_result(prec.bits, n)
}

pub fn ell_k(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, k_approx)
}

pub fn ell_e(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, e_approx)
}

/// `K'(r) = K(r')`
pub fn ell_kp(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, |a| k_approx(&a.complement()))
}

/// `E'(r) = E(r')`
pub fn ell_ep(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, |a| e_approx(&a.complement()))
}

/// K through `π/(2·agm(1, r'))` regardless of `r`.
pub fn ell_k_agm(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, |a| {
        let (k, _, n) = ke_agm(a);
        Ok((k, n))
    })
}

/// K through the Gauss series regardless of `r`, with term cap `cap`.
pub fn ell_k_series(m: &Modulus, prec: &PrecisionConfig, cap: usize) -> Result<EvalResult> {
    public(m, prec, |a| {
        let (f, n) = hyp_approx(&half(), &half(), &Rational::from(1), &a.x, cap)?;
        Ok((&f * &Approx::pi(a.wp()).mul_2exp(-1), n))
    })
}

pub fn arth_ratio(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, f1_approx)
}

/// `dK/dr = (E - r'²K)/(r r'²)`
pub fn dk_dr(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, |a| {
        let (d, n) = d_approx(a)?;
        Ok((&(&d * &a.r) / &a.rp2, n))
    })
}

/// `dE/dr = (E - K)/r = -r(K - D)`
pub fn de_dr(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, |a| {
        let (d, n1) = d_approx(a)?;
        let (k, n2) = k_approx(a)?;
        Ok((-(&(&k - &d) * &a.r), n1 + n2))
    })
}

/// `(E - r'²K)/r²`
pub fn e_minus_rp2k_over_r2(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, d_approx)
}

/// Same quantity by direct subtraction of K and E.
pub fn e_minus_rp2k_over_r2_direct(m: &Modulus, prec: &PrecisionConfig) -> Result<EvalResult> {
    public(m, prec, |a| {
        let (k, n1) = k_approx(a)?;
        let (e, n2) = e_approx(a)?;
        Ok((&(&e - &(&a.rp2 * &k)) / &a.x, n1 + n2))
    })
}

/// `(G0(x), G1(x))`
pub fn g0_g1(x: &Float, prec: &PrecisionConfig) -> Result<(EvalResult, EvalResult)> {
    if !(*x > 0 && *x < 1) {
        return Err(Error::Domain(format!("x = {} outside (0,1)", x.to_f64())));
    }
    let arg = Arg::from_x(x, wp_of(prec));
    let (g0, n0) = g0_approx(&arg)?;
    let (g1, n1) = g1_approx(&arg)?;
    Ok((g0.to_result(prec.bits, n0)?, g1.to_result(prec.bits, n1)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p128() -> PrecisionConfig {
        PrecisionConfig::new(128)
    }

    fn close(r: &EvalResult, expect: f64, tol: f64) {
        let v = r.value.to_f64();
        assert!((v - expect).abs() <= tol, "{v} vs {expect}");
    }

    #[test]
    fn trivial_cases() {
        let z = Float::with_val(128, 0);
        let h = half();
        let r = hyp_series(&h, &h, &Rational::from(1), &z, &p128()).unwrap();
        assert_eq!(r.value, 1);
        let one = Float::with_val(128, 1);
        assert_eq!(agm(&one, &one, &p128()).unwrap().value, 1);
        let two = Float::with_val(128, 2);
        assert_eq!(agm(&two, &two, &p128()).unwrap().value, 2);
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = half();
        let x = Float::with_val(64, 0.5);
        assert!(matches!(
            hyp_series(&h, &h, &Rational::from(-2), &x, &p128()),
            Err(Error::ParamOutOfRange(_))
        ));
        let x1 = Float::with_val(64, 1);
        assert!(matches!(
            hyp_series(&h, &h, &Rational::from(1), &x1, &p128()),
            Err(Error::Domain(_))
        ));
        assert!(Modulus::from_f64(1.0, 64).is_err());
        assert!(Modulus::from_f64(0.0, 64).is_err());
        assert!(agm(&Float::with_val(64, -1), &x, &p128()).is_err());
    }

    #[test]
    fn hyp_near_one_hits_the_cap() {
        let h = half();
        let x = Float::with_val(128, 0.9999);
        let r = hyp_series(&h, &h, &Rational::from(1), &x, &PrecisionConfig::new(64));
        assert!(matches!(r, Err(Error::NonConvergent { .. })));
    }

    #[test]
    fn terminating_series_is_exact() {
        // F(-2, 1; 1; x) = (1 - x)^2
        let x = Float::with_val(128, 0.25);
        let r = hyp_series(
            &Rational::from(-2),
            &Rational::from(1),
            &Rational::from(1),
            &x,
            &p128(),
        )
        .unwrap();
        assert_eq!(r.value, 0.5625);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn both_sides_of_the_switch_agree() {
        for r in [0.70, 0.7071, 0.7072, 0.72] {
            let m = Modulus::from_f64(r, 128).unwrap();
            let s = ell_k_series(&m, &p128(), 100_000).unwrap();
            let a = ell_k_agm(&m, &p128()).unwrap();
            let d = Float::with_val(128, &s.value - &a.value).abs();
            assert!(
                d <= Float::with_val(64, &s.err_bound + &a.err_bound) * 2u32,
                "r={r}"
            );
        }
    }

    #[test]
    fn e_branches_agree_at_switch() {
        let wp = 160;
        let x = Float::with_val(wp, 0.5);
        let arg = Arg::from_x(&x, wp);
        let (_, e_agm, _) = ke_agm(&arg);
        let (e_ser, _) = e_approx(&arg).unwrap();
        let d = (&e_agm - &e_ser).abs();
        assert!(d.value().to_f64() < 1e-40);
        let (d_ser, _) = d_approx(&arg).unwrap();
        let (k_agm, e_agm2, _) = ke_agm(&arg);
        let d_dir = &(&e_agm2 - &(&arg.rp2 * &k_agm)) / &arg.x;
        assert!((&d_ser - &d_dir).abs().value().to_f64() < 1e-40);
    }

    #[test]
    fn err_bounds_are_small() {
        for r in [1e-6, 0.3, 0.5, 0.9, 1.0 - 1e-6] {
            let m = Modulus::from_f64(r, 128).unwrap();
            for res in [
                ell_k(&m, &p128()),
                ell_e(&m, &p128()),
                arth_ratio(&m, &p128()),
            ] {
                let res = res.unwrap();
                let rel = res.err_bound.to_f64() / res.value.to_f64();
                assert!(rel < 2f64.powi(-124), "r={r} rel={rel}");
            }
        }
    }

    #[test]
    fn known_values() {
        let m = Modulus::from_f64(0.5, 128).unwrap();
        close(&arth_ratio(&m, &p128()).unwrap(), 3f64.ln(), 1e-15);
        close(&dk_dr(&m, &p128()).unwrap(), 0.541_731_848_613_280_3, 1e-15);
        close(
            &e_minus_rp2k_over_r2(&m, &p128()).unwrap(),
            0.812_597_772_919_920_5,
            1e-15,
        );
        let de = de_dr(&m, &p128()).unwrap();
        let k = ell_k(&m, &p128()).unwrap().value.to_f64();
        let e = ell_e(&m, &p128()).unwrap().value.to_f64();
        assert!((de.value.to_f64() - (e - k) / 0.5).abs() < 1e-14);
    }

    #[test]
    fn complementary_integrals() {
        let m = Modulus::from_f64(0.6, 128).unwrap();
        let kp = ell_kp(&m, &p128()).unwrap().value.to_f64();
        let m2 = Modulus::from_f64(0.8, 128).unwrap();
        let k2 = ell_k(&m2, &p128()).unwrap().value.to_f64();
        assert!((kp - k2).abs() < 1e-14);
        // Legendre: E K' + E' K - K K' = π/2
        let k = ell_k(&m, &p128()).unwrap().value.to_f64();
        let e = ell_e(&m, &p128()).unwrap().value.to_f64();
        let ep = ell_ep(&m, &p128()).unwrap().value.to_f64();
        assert!((e * kp + ep * k - k * kp - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn g0_g1_closed_forms_match_series_at_switch() {
        let x = Float::with_val(128, 0.5);
        let (g0, g1) = g0_g1(&x, &p128()).unwrap();
        let above = Float::with_val(128, 0.5) + Float::with_val(128, 1e-30);
        let (h0, h1) = g0_g1(&above, &p128()).unwrap();
        assert!((g0.value.to_f64() - h0.value.to_f64()).abs() < 1e-14);
        assert!((g1.value.to_f64() - h1.value.to_f64()).abs() < 1e-14);
    }
}
