//! Exact Maclaurin representations `r^k · Σ_j c_j · S_j(v)` with constant
//! scales `c_j` and rational series `S_j`, and their evaluation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Rational};

use super::id::{FnName, FunctionId};
use crate::approx::{Approx, ERR_PREC};
use crate::constant::Constant;
use crate::error::{Error, Result};
use crate::exact::sequences::a_table;
use crate::exact::{named_series, ps_from_known, seq, Known, NamedSeries, PowerSeries, SequenceId};

/// Series are used for `v <= V_SWITCH`, i.e. `r <= 0.3` when `v = r²`.
pub const V_SWITCH: f64 = 0.09;

/// Bits added to the target on the series path.
pub const SERIES_GUARD: u32 = 24;

/// The variable a representation is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    /// `x = r²` (or the argument itself for functions of `x`)
    X,
    /// `r`
    R,
}

#[derive(Clone, Debug)]
pub struct SeriesRep {
    pub var: Var,
    /// Power of `r` multiplying the sum.
    pub pre_r: u32,
    pub parts: Vec<(Constant, PowerSeries)>,
}

impl SeriesRep {
    fn single(s: PowerSeries) -> Self {
        SeriesRep {
            var: Var::X,
            pre_r: 0,
            parts: vec![(Constant::q(1), s)],
        }
    }

    fn scaled(c: Constant, s: PowerSeries) -> Self {
        SeriesRep {
            var: Var::X,
            pre_r: 0,
            parts: vec![(c, s)],
        }
    }

    pub fn order(&self) -> usize {
        self.parts.iter().map(|(_, s)| s.order()).min().unwrap_or(0)
    }

    fn truncate(mut self, order: usize) -> Self {
        for p in &mut self.parts {
            p.1 = p.1.truncate(order);
        }
        self
    }

    /// Coefficient of `v^m` in the sum, as an exact constant.
    pub fn coeff(&self, m: usize) -> Constant {
        self.parts
            .iter()
            .fold(Constant::zero(), |acc, (c, s)| &acc + &c.scale(s.coeff(m)))
    }

    /// Value at `r → 0⁺`.
    pub fn limit_at_zero(&self) -> Constant {
        if self.pre_r > 0 {
            Constant::zero()
        } else {
            self.coeff(0)
        }
    }

    /// `(S - Σ_{j<k} C_j v^j) / v^k`, defined when there is no `r` prefactor.
    pub fn tail(&self, k: usize) -> Result<Self> {
        if self.pre_r > 0 {
            return Err(Error::InvalidSeries(
                "tail of a representation with an r prefactor".into(),
            ));
        }
        let mut parts = Vec::with_capacity(self.parts.len());
        for (c, s) in &self.parts {
            let low: Vec<Rational> = s.coeffs()[..k.min(s.order() + 1)].to_vec();
            let t = (s - &PowerSeries::poly(&low, s.order())).shift_down(k)?;
            parts.push((c.clone(), t));
        }
        Ok(SeriesRep {
            var: self.var,
            pre_r: 0,
            parts,
        })
    }

    /// Single positive-scaled part whose coefficients are all positive up to `n`.
    pub fn coefficients_positive(&self, n: usize) -> Option<bool> {
        if self.parts.len() != 1 || self.pre_r > 0 {
            return None;
        }
        let (c, s) = &self.parts[0];
        if c.to_f64() <= 0.0 {
            return None;
        }
        Some(
            s.coeffs()[..=n.min(s.order())]
                .iter()
                .all(|q| q.cmp0().is_gt()),
        )
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Base series at order `m`.
struct B {
    m: usize,
}

impl B {
    fn known(&self, k: Known, extra: usize) -> Result<PowerSeries> {
        ps_from_known(k, self.m + extra)
    }
    fn f0(&self) -> Result<PowerSeries> {
        self.known(Known::F0, 0)
    }
    fn f1(&self) -> Result<PowerSeries> {
        self.known(Known::F1, 0)
    }
    fn l0(&self) -> Result<PowerSeries> {
        self.known(Known::LogF0, 1)?.shift_down(1)
    }
    fn l1(&self) -> Result<PowerSeries> {
        self.known(Known::LogF1, 1)?.shift_down(1)
    }
    /// `2E/π`
    fn e0(&self) -> PowerSeries {
        let a = a_table(self.m);
        PowerSeries::from_fn(self.m, |n| Rational::from(&a[n] / (1 - 2 * n as i64)))
    }
    /// `G0 = 4D/π`
    fn s(&self) -> PowerSeries {
        let a = a_table(self.m);
        PowerSeries::from_fn(self.m, |n| Rational::from(&a[n] / (n as i64 + 1)))
    }
    fn g1(&self) -> PowerSeries {
        PowerSeries::from_fn(self.m, |n| q(3, (2 * n as i64 + 1) * (2 * n as i64 + 3)))
    }
    fn t(&self) -> Result<PowerSeries> {
        let f1 = self.known(Known::F1, 1)?;
        (&f1 - &PowerSeries::one(self.m + 1)).shift_down(1)
    }
    fn a1(&self) -> Result<PowerSeries> {
        let f1 = self.known(Known::F1, 1)?;
        let rp2f1 = PowerSeries::poly_q(&[(1, 1), (-1, 1)], self.m + 1).mul(&f1);
        (&PowerSeries::one(self.m + 1) - &rp2f1).shift_down(1)
    }
    fn p(&self, cs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::poly_q(cs, self.m)
    }
    fn p_ext(&self, cs: &[(i64, i64)], extra: usize) -> PowerSeries {
        PowerSeries::poly_q(cs, self.m + extra)
    }
    fn rp2(&self) -> PowerSeries {
        self.p(&[(1, 1), (-1, 1)])
    }
    /// `(1-x)^(-1/2)`
    fn isq(&self) -> Result<PowerSeries> {
        self.rp2().pow_q(&q(-1, 2))
    }
    fn f25(&self) -> Result<PowerSeries> {
        self.s()
            .mul(&self.f1()?)
            .div(&self.a1()?.mul(&self.f0()?).scale_q(2, 1))
    }
    /// `(1 - x/2 - x²/16 - x³/32)F0 - E0`, divisible by `x⁴`
    fn f18_core(&self) -> Result<PowerSeries> {
        let q0 = self.p(&[(1, 1), (-1, 2), (-1, 16), (-1, 32)]);
        (&q0.mul(&self.f0()?) - &self.e0()).shift_down(4)
    }
    fn l0_minus(&self) -> Result<PowerSeries> {
        let lin = self.p(&[(3, 4), (1, 320)]);
        Ok(&self.l0()? - &lin.mul(&self.l1()?))
    }
    fn g1f(&self) -> Result<PowerSeries> {
        let lin = self.p(&[(3, 4), (1, 4)]);
        Ok(&lin.mul(&self.l1()?) - &self.l0()?)
    }
}

fn half_pi() -> Constant {
    Constant::pi(q(1, 2))
}

fn two_over_pi() -> Constant {
    Constant::inv_pi(2)
}

fn build(id: &FunctionId, order: usize) -> Result<SeriesRep> {
    let extra = if matches!(id.name(), FnName::H(2) | FnName::H(3)) {
        id.n() + 8
    } else {
        8
    };
    let b = B { m: order + extra };
    let single = SeriesRep::single;
    let rep = match id.name() {
        FnName::F(1) => single(b.a1()?),
        FnName::F(2) => single(b.a1()?.div(&b.rp2().mul(&b.f1()?))?),
        FnName::F(3) => single(b.a1()?.div(&(&b.t()? + &b.f1()?))?),
        FnName::F(4) => SeriesRep::scaled(two_over_pi(), (&b.t()? + &b.f1()?).div(&b.f0()?)?),
        FnName::F(5) => single((&PowerSeries::one(b.m) + &b.rp2().mul(&b.f1()?)).mul(&b.isq()?)),
        FnName::F(6) => single(b.a1()?.mul(&b.isq()?).div(&b.t()?)?),
        FnName::F(7) => single(b.l1()?),
        FnName::F(8) => single(b.rp2().mul(&b.f1()?).mul(&b.l1()?).div(&b.a1()?)?),
        FnName::F(9) => single(
            b.rp2()
                .mul(&b.f0()?)
                .mul(&b.l0()?)
                .scale_q(2, 1)
                .div(&b.s())?,
        ),
        FnName::F(10) => {
            let f1 = b.known(Known::F1, 2)?;
            let a = b.p_ext(&[(72, 1), (-126, 1), (19, 1)], 2);
            let c = b.p_ext(&[(72, 1), (-150, 1), (-253, 1), (167, 1)], 2);
            single((&a - &c.mul(&f1)).shift_down(2)?)
        }
        FnName::F(11) => {
            let f1 = b.known(Known::F1, 1)?;
            let s = &b.p_ext(&[(13, 1), (-9, 1)], 1).mul(&f1) - &b.p_ext(&[(13, 1), (-6, 1)], 1);
            single(s.shift_down(1)?)
        }
        FnName::F(12) => {
            let f1 = b.known(Known::F1, 1)?;
            let s = &b.p_ext(&[(1, 1), (-5, 1)], 1).mul(&f1) - &b.p_ext(&[(1, 1), (-2, 1)], 1);
            single(s.shift_down(1)?)
        }
        FnName::F(13) => {
            let f1 = b.known(Known::F1, 3)?;
            let s = &b.p_ext(&[(15, 1), (-12, 1), (1, 1)], 3).mul(&f1)
                - &b.p_ext(&[(15, 1), (-7, 1)], 3);
            single(s.shift_down(3)?)
        }
        FnName::F(14) => {
            let f1 = b.known(Known::F1, 2)?;
            let s =
                &b.p_ext(&[(3, 1), (-3, 1)], 2) - &b.p_ext(&[(3, 1), (-4, 1), (-1, 1)], 2).mul(&f1);
            single(s.shift_down(2)?)
        }
        FnName::F(15) => single(b.f1()?.div(&b.f0()?)?),
        FnName::F(16) => single(b.g1().div(&b.s())?),
        FnName::F(17) => single(&b.f0()? - &b.f1()?.mul(&b.s()).div(&b.g1())?.scale_q(3, 4)),
        FnName::F(18) => SeriesRep::scaled(half_pi(), b.f18_core()?),
        FnName::F(19) => single(b.f18_core()?.div(&b.f0()?)?),
        FnName::F(20) | FnName::F(21) => {
            let c = if id.name() == FnName::F(20) { 4 } else { 160 };
            let a = b.p(&[(3, 4), (1, c)]).mul(&b.a1()?).mul(&b.f0()?);
            let d = b.s().mul(&b.f1()?).scale_q(1, 2);
            let s = if c == 4 { &a - &d } else { &d - &a };
            SeriesRep {
                var: Var::X,
                pre_r: 3,
                parts: vec![(half_pi(), s)],
            }
        }
        FnName::F(22) => {
            let a = b.a1()?.mul(&b.e0());
            let t = b.rp2().mul(&b.t()?).mul(&b.f0()?).scale_q(2, 1);
            SeriesRep::scaled(half_pi(), (&a - &t).shift_down(1)?)
        }
        FnName::F(23) => {
            let a = b.rp2().mul(&b.f1()?).mul(&b.f0()?).scale_q(2, 1);
            SeriesRep::scaled(half_pi(), &a + &b.a1()?.mul(&b.e0()))
        }
        FnName::F(24) => {
            let s = &b.f25()?.scale_q(4, 1) - &PowerSeries::constant(3, b.m);
            single(s.shift_down(1)?)
        }
        FnName::F(25) => single(b.f25()?),
        FnName::F(_) => unreachable!("validated name"),
        FnName::G => {
            let c = id.param().expect("validated").clone();
            let lin = PowerSeries::poly(&[q(3, 4), c], b.m);
            single((&lin.mul(&b.l1()?) - &b.l0()?).shift_up(1))
        }
        FnName::Gn(1) => single(b.g1f()?),
        FnName::Gn(2) => single(b.g1f()?.shift_down(1)?.div(&b.l1()?)?),
        FnName::Gn(3) => single(b.l0_minus()?.shift_down(1)?.div(&b.l1()?)?),
        FnName::Gn(4) => single(b.l0_minus()?.shift_down(1)?),
        FnName::Gn(_) => unreachable!("validated name"),
        FnName::SmallF => single(named_series(NamedSeries::F, order)?),
        FnName::BigG => single(b.l0()?.div(&b.l1()?)?),
        FnName::H(1) => SeriesRep::scaled(half_pi(), b.f0()?.div(&b.f1()?)?),
        FnName::H(2) | FnName::H(3) => {
            let n = id.n();
            let u = &b.f1()?.scale_q(3, 4) - &b.f0()?;
            let low: Vec<Rational> = (0..=n).map(|k| seq(SequenceId::ATilde, k)).collect();
            let h2 = (&u - &PowerSeries::poly(&low, b.m)).shift_down(n + 1)?;
            if id.name() == FnName::H(2) {
                single(h2)
            } else {
                single(h2.div(&b.f1()?)?)
            }
        }
        FnName::H(4) => {
            let p3 = b.p(&[(1, 1), (-1, 12), (-91, 2880)]);
            SeriesRep::scaled(half_pi(), (&p3 - &b.f0()?.div(&b.f1()?)?).shift_down(3)?)
        }
        FnName::H(5) => SeriesRep::scaled(two_over_pi(), b.f1()?.pow_q(&q(79, 320))?),
        FnName::H(6) => {
            let p = b.p(&[(0, 1), (1, 12), (91, 2880)]);
            SeriesRep::scaled(half_pi(), &b.f0()?.div(&b.f1()?)? + &p)
        }
        FnName::H(7) => {
            let m = 2 * b.m + 1;
            let rat = PowerSeries::poly_q(
                &[(1, 1), (-1, 12), (0, 1), (-91, 2880), (0, 1), (-2549, 2880)],
                m,
            );
            let pi_part =
                PowerSeries::poly_q(&[(-1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 1)], m);
            SeriesRep {
                var: Var::R,
                pre_r: 0,
                parts: vec![(Constant::q(1), rat), (two_over_pi(), pi_part)],
            }
        }
        FnName::H(8) => {
            let f1 = b.f1()?.even_substitute();
            let m = f1.order();
            let rt = b.t()?.even_substitute().shift_up(1).scale_q(-1, 4);
            let rat = &rt + &PowerSeries::poly_q(&[(1, 1), (0, 1), (0, 1), (-3, 4)], m).mul(&f1);
            let pi_part = PowerSeries::poly_q(&[(-1, 1), (0, 1), (0, 1), (1, 1)], m).mul(&f1);
            SeriesRep {
                var: Var::R,
                pre_r: 0,
                parts: vec![(Constant::q(1), rat), (two_over_pi(), pi_part)],
            }
        }
        FnName::H(9) => {
            let f1 = b.f1()?;
            let rat = &b
                .p(&[(1, 4), (-1, 12), (2069, 2880), (-2549, 2880)])
                .mul(&f1)
                - &PowerSeries::constant(q(1, 4), b.m);
            let pi_part = b.p(&[(0, 1), (0, 1), (-1, 1), (1, 1)]).mul(&f1);
            SeriesRep {
                var: Var::X,
                pre_r: 0,
                parts: vec![(Constant::q(1), rat), (two_over_pi(), pi_part)],
            }
        }
        FnName::H(10) => {
            let a = b.t()?.shift_up(1).scale_q(1, 4);
            let c = b.p(&[(0, 1), (1, 12), (1, 45), (871, 48384)]).mul(&b.f1()?);
            single(&a - &c)
        }
        FnName::H(11) => single(named_series(NamedSeries::H11, order)?),
        FnName::H(12) => single(named_series(NamedSeries::H12, order)?),
        FnName::H(13) => single(named_series(NamedSeries::H13, order)?),
        FnName::H(_) => unreachable!("validated name"),
    };
    let rep = rep.truncate(order);
    if rep.order() < order {
        return Err(Error::InvalidSeries(format!(
            "{id}: built order {} below {order}",
            rep.order()
        )));
    }
    Ok(rep)
}

/// Terms needed at `v` for `wp` bits, before the tail estimate.
pub fn terms_needed(v: f64, wp: u32) -> usize {
    if v <= 0.0 {
        return 1;
    }
    let per = -v.log2();
    let need = (wp as f64 + 16.0 - (1.0 - v).log2()) / per;
    (need.ceil() as usize).max(1)
}

/// Build order used for evaluation at `wp` bits anywhere on the series side.
pub fn build_order(wp: u32) -> usize {
    let n = terms_needed(V_SWITCH, wp) + 8;
    n.div_ceil(32) * 32
}

type RepCache = Mutex<HashMap<String, Arc<SeriesRep>>>;
type FloatCache = Mutex<HashMap<(String, u32), Arc<Vec<(Approx, Vec<Approx>)>>>>;

fn rep_cache() -> &'static RepCache {
    static C: OnceLock<RepCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn float_cache() -> &'static FloatCache {
    static C: OnceLock<FloatCache> = OnceLock::new();
    C.get_or_init(Default::default)
}

fn key(id: &FunctionId, tail: usize) -> String {
    format!("{id}/t{tail}")
}

/// The representation of `id`, or of its `k`-th tail, exact to `order`.
pub fn rep(id: &FunctionId, tail: usize, order: usize) -> Result<Arc<SeriesRep>> {
    let k = key(id, tail);
    if let Some(r) = rep_cache().lock().unwrap().get(&k) {
        if r.order() >= order {
            return Ok(r.clone());
        }
    }
    let built = if tail == 0 {
        build(id, order)?
    } else {
        build(id, order + tail)?.tail(tail)?
    };
    let built = Arc::new(built);
    let mut map = rep_cache().lock().unwrap();
    let keep = map.get(&k).is_none_or(|old| old.order() < built.order());
    if keep {
        map.insert(k, built.clone());
    }
    Ok(built)
}

fn float_coeffs(
    id: &FunctionId,
    tail: usize,
    wp: u32,
) -> Result<(Arc<SeriesRep>, Arc<Vec<(Approx, Vec<Approx>)>>)> {
    let r = rep(id, tail, build_order(wp))?;
    let k = (key(id, tail), wp);
    if let Some(c) = float_cache().lock().unwrap().get(&k) {
        return Ok((r, c.clone()));
    }
    let parts: Vec<(Approx, Vec<Approx>)> = r
        .parts
        .iter()
        .map(|(c, s)| {
            (
                c.eval(wp),
                s.coeffs().iter().map(|q| Approx::rational(q, wp)).collect(),
            )
        })
        .collect();
    let parts = Arc::new(parts);
    float_cache().lock().unwrap().insert(k, parts.clone());
    Ok((r, parts))
}

/// Evaluates the representation (or its `k`-th tail) at `v`, with `r` for
/// the prefactor. Truncation is estimated from the coefficients just past
/// the cut, doubled.
pub fn eval(id: &FunctionId, tail: usize, v: &Approx, r: &Approx) -> Result<Approx> {
    let wp = v.prec();
    let (rep, parts) = float_coeffs(id, tail, wp)?;
    let vf = v.to_f64();
    if !(vf < 1.0) {
        return Err(Error::Domain(format!("series variable {vf} outside [0,1)")));
    }
    let order = rep.order();
    let n = terms_needed(vf, wp).min(order.saturating_sub(8));
    let mut sum = Approx::zero(wp);
    let mut tail_err = Float::with_val(ERR_PREC, 0);
    let vpow = {
        let vv = Float::with_val(ERR_PREC, v.value().abs_ref()) + v.err();
        let mut p = Float::with_val(ERR_PREC, rug::ops::Pow::pow(&vv, n as u32 + 1));
        p /= Float::with_val(ERR_PREC, 1 - vv.clone());
        p
    };
    for ((_, s), (scale, cs)) in rep.parts.iter().zip(parts.iter()) {
        let mut acc = Approx::zero(wp);
        for c in cs[..=n].iter().rev() {
            acc = &(&acc * v) + c;
        }
        sum = &sum + &(scale * &acc);
        let hi = (n + 8).min(s.order());
        let big = s.coeffs()[n + 1..=hi]
            .iter()
            .map(|q| Float::with_val(ERR_PREC, q).abs())
            .fold(Float::with_val(ERR_PREC, 0), |a, b| a.max(&b));
        let smag = Float::with_val(ERR_PREC, scale.value().abs_ref()) + scale.err();
        tail_err += Float::with_val(ERR_PREC, &big * &smag) * 2u32 * &vpow;
    }
    let sum = &sum + &Approx::with_err(Float::new(wp), tail_err);
    Ok(if rep.pre_r > 0 {
        &r.powi(rep.pre_r) * &sum
    } else {
        sum
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(s: &str) -> FunctionId {
        s.parse().unwrap()
    }

    fn limit(s: &str) -> Constant {
        rep(&id(s), 0, 32).unwrap().limit_at_zero()
    }

    #[test]
    fn limits_at_zero_are_exact() {
        assert_eq!(limit("f1"), Constant::ratio(2, 3));
        assert_eq!(limit("f4"), Constant::inv_pi(q(8, 3)));
        assert_eq!(limit("f18"), Constant::pi(q(41, 4096)));
        assert_eq!(limit("f19"), Constant::ratio(41, 2048));
        assert_eq!(limit("f22"), Constant::pi(q(1, 30)));
        assert_eq!(limit("f23"), Constant::pi(q(4, 3)));
        assert_eq!(limit("f24"), Constant::ratio(1, 40));
        assert_eq!(limit("f25"), Constant::ratio(3, 4));
        assert_eq!(limit("h4"), Constant::pi(q(871, 96768)));
        assert_eq!(limit("h2:1"), Constant::ratio(3, 320));
        assert_eq!(limit("g2"), Constant::ratio(79, 320));
        assert_eq!(limit("f10"), Constant::ratio(1538, 5));
        assert_eq!(limit("f17"), Constant::ratio(1, 4));
        assert_eq!(limit("h7"), &Constant::q(1) - &Constant::inv_pi(2));
        assert_eq!(limit("h8"), &Constant::q(1) - &Constant::inv_pi(2));
        assert_eq!(limit("h6"), Constant::pi(q(1, 2)));
        assert_eq!(limit("f17"), Constant::ratio(1, 4));
        assert_eq!(limit("f16"), Constant::q(1));
        assert!(limit("f20").is_zero());
        assert!(limit("g:1/4").is_zero());
    }

    #[test]
    fn tails_peel_coefficients() {
        let f = id("f");
        let t = rep(&f, 1, 32).unwrap();
        assert_eq!(t.coeff(0), Constant::ratio(517, 201600));
        let h9 = rep(&id("h9"), 0, 32).unwrap();
        assert!(h9.coeff(0).is_zero() && h9.coeff(1).is_zero());
        let c2 = &Constant::ratio(2133, 2880) - &Constant::inv_pi(2);
        assert_eq!(h9.coeff(2), c2);
        assert!(h9.coeff(2).eval(64).to_f64() > 0.0);
        let h10 = rep(&id("h10"), 0, 32).unwrap();
        assert_eq!(
            h10.coeff(3).as_rational().unwrap(),
            q(-161595, 105 * 241920)
        );
    }
}
