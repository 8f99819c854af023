//! Closed-form evaluation from K, E and arth(r)/r at working precision.

use std::cell::OnceCell;

use rug::Rational;

use super::id::{FnName, FunctionId};
use crate::approx::Approx;
use crate::ell::{ke_agm, Arg};
use crate::error::Result;
use crate::exact::{seq, SequenceId};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Per-point cache of the building blocks.
pub(crate) struct Ctx {
    pub arg: Arg,
    ke: OnceCell<(Approx, Approx)>,
    f1: OnceCell<Approx>,
    pi: OnceCell<Approx>,
}

impl Ctx {
    pub fn new(arg: Arg) -> Self {
        Ctx {
            arg,
            ke: OnceCell::new(),
            f1: OnceCell::new(),
            pi: OnceCell::new(),
        }
    }

    pub fn wp(&self) -> u32 {
        self.arg.wp()
    }

    pub fn c(&self, n: i64, d: i64) -> Approx {
        Approx::rational(&q(n, d), self.wp())
    }

    pub fn one(&self) -> Approx {
        Approx::one(self.wp())
    }

    pub fn pi(&self) -> &Approx {
        self.pi.get_or_init(|| Approx::pi(self.wp()))
    }

    pub fn two_over_pi(&self) -> Approx {
        &Approx::int(2, self.wp()) / self.pi()
    }

    fn ke(&self) -> &(Approx, Approx) {
        self.ke.get_or_init(|| {
            let (k, e, _) = ke_agm(&self.arg);
            (k, e)
        })
    }

    pub fn k(&self) -> &Approx {
        &self.ke().0
    }

    pub fn e(&self) -> &Approx {
        &self.ke().1
    }

    /// `2K/π`
    pub fn f0(&self) -> Approx {
        &self.k().mul_2exp(1) / self.pi()
    }

    /// `arth(r)/r = ln(1 + 2r/(1-r)) / (2r)`
    pub fn f1(&self) -> &Approx {
        self.f1.get_or_init(|| {
            let r = &self.arg.r;
            let u = &r.mul_2exp(1) / &(&self.one() - r);
            &u.ln_1p() / &r.mul_2exp(1)
        })
    }

    pub fn x(&self) -> &Approx {
        &self.arg.x
    }

    pub fn rp2(&self) -> &Approx {
        &self.arg.rp2
    }

    /// `(E - r'²K)/r²`
    pub fn d(&self) -> Approx {
        &(self.e() - &(self.rp2() * self.k())) / self.x()
    }

    /// `(F1 - 1)/x`
    pub fn t(&self) -> Approx {
        &(self.f1() - &self.one()) / self.x()
    }

    /// `(1 - (1-x)F1)/x`
    pub fn a1(&self) -> Approx {
        &(&self.one() - &(self.rp2() * self.f1())) / self.x()
    }

    pub fn l0(&self) -> Approx {
        &self.f0().ln() / self.x()
    }

    pub fn l1(&self) -> Approx {
        &self.f1().ln() / self.x()
    }

    /// `G0 = 4D/π`
    pub fn g0(&self) -> Approx {
        &self.d().mul_2exp(2) / self.pi()
    }

    /// `G1 = (3/2)·A1`
    pub fn g1(&self) -> Approx {
        self.a1().mul_q(&q(3, 2))
    }

    /// `c0 + c1 x + c2 x² + …`
    pub fn poly(&self, cs: &[(i64, i64)]) -> Approx {
        let mut acc = Approx::zero(self.wp());
        for &(n, d) in cs.iter().rev() {
            acc = &(&acc * self.x()) + &self.c(n, d);
        }
        acc
    }

    pub fn rpow(&self, k: u32) -> Approx {
        self.arg.r.powi(k)
    }
}

/// `ã_0 + ã_1 x + … + ã_n xⁿ`
fn a_tilde_poly(ctx: &Ctx, n: usize) -> Approx {
    let mut acc = Approx::zero(ctx.wp());
    for k in (0..=n).rev() {
        acc = &(&acc * ctx.x()) + &Approx::rational(&seq(SequenceId::ATilde, k), ctx.wp());
    }
    acc
}

/// `((3/4)F1 - F0 - Σ_{k≤n} ã_k x^k) / x^{n+1}`
fn h2(ctx: &Ctx, n: usize) -> Approx {
    let num = &(&(&ctx.f1().mul_q(&q(3, 4)) - &ctx.f0()) - &a_tilde_poly(ctx, n));
    num / &ctx.x().powi(n as u32 + 1)
}

/// `L0 - (3/4 + x/320)L1`
fn l0_minus(ctx: &Ctx) -> Approx {
    &ctx.l0() - &(&ctx.poly(&[(3, 4), (1, 320)]) * &ctx.l1())
}

/// `(3/4 + x/4)L1 - L0`
fn g1(ctx: &Ctx) -> Approx {
    &(&ctx.poly(&[(3, 4), (1, 4)]) * &ctx.l1()) - &ctx.l0()
}

/// `D·F1 / (A1·K)`
fn f25(ctx: &Ctx) -> Approx {
    &(&ctx.d() * ctx.f1()) / &(&ctx.a1() * ctx.k())
}

/// `[(1 - x/2 - x²/16 - x³/32)K - E] / x⁴`
fn f18(ctx: &Ctx) -> Approx {
    let q0 = ctx.poly(&[(1, 1), (-1, 2), (-1, 16), (-1, 32)]);
    &(&(&q0 * ctx.k()) - ctx.e()) / &ctx.x().powi(4)
}

pub(crate) fn eval(id: &FunctionId, ctx: &Ctx) -> Result<Approx> {
    let x = ctx.x();
    let rp2 = ctx.rp2();
    let f1 = ctx.f1();
    let one = ctx.one();
    let v = match id.name() {
        FnName::F(1) => ctx.a1(),
        FnName::F(2) => &ctx.a1() / &(rp2 * f1),
        FnName::F(3) => &ctx.a1() / &(&ctx.t() + f1),
        FnName::F(4) => &(&ctx.t() + f1) / ctx.k(),
        FnName::F(5) => &(&one + &(rp2 * f1)) / &rp2.sqrt(),
        FnName::F(6) => &ctx.a1() / &(&rp2.sqrt() * &ctx.t()),
        FnName::F(7) => ctx.l1(),
        FnName::F(8) => &(&(rp2 * f1) * &ctx.l1()) / &ctx.a1(),
        FnName::F(9) => &(&(rp2 * ctx.k()) * &ctx.l0()) / &ctx.d(),
        FnName::F(10) => {
            let a = ctx.poly(&[(72, 1), (-126, 1), (19, 1)]);
            let b = ctx.poly(&[(72, 1), (-150, 1), (-253, 1), (167, 1)]);
            &(&a - &(&b * f1)) / &x.square()
        }
        FnName::F(11) => {
            &(&(&ctx.poly(&[(13, 1), (-9, 1)]) * f1) - &ctx.poly(&[(13, 1), (-6, 1)])) / x
        }
        FnName::F(12) => {
            &(&(&ctx.poly(&[(1, 1), (-5, 1)]) * f1) - &ctx.poly(&[(1, 1), (-2, 1)])) / x
        }
        FnName::F(13) => {
            let a = &ctx.poly(&[(15, 1), (-12, 1), (1, 1)]) * f1;
            &(&a - &ctx.poly(&[(15, 1), (-7, 1)])) / &x.powi(3)
        }
        FnName::F(14) => {
            let a = &ctx.poly(&[(3, 1), (-4, 1), (-1, 1)]) * f1;
            &(&rp2.mul_q(&q(3, 1)) - &a) / &x.square()
        }
        FnName::F(15) => f1 / &ctx.f0(),
        FnName::F(16) => &ctx.g1() / &ctx.g0(),
        FnName::F(17) => &ctx.f0() - &(&(f1 * &ctx.g0()) / &ctx.g1()).mul_q(&q(3, 4)),
        FnName::F(18) => f18(ctx),
        FnName::F(19) => &f18(ctx) / ctx.k(),
        FnName::F(20) => {
            let a = &(&ctx.poly(&[(3, 4), (1, 4)]) * &ctx.a1()) * ctx.k();
            &ctx.rpow(3) * &(&a - &(&ctx.d() * f1))
        }
        FnName::F(21) => {
            let a = &(&ctx.poly(&[(3, 4), (1, 160)]) * &ctx.a1()) * ctx.k();
            &ctx.rpow(3) * &(&(&ctx.d() * f1) - &a)
        }
        FnName::F(22) => {
            let b = &(&(rp2 * &ctx.t()) * ctx.k()).mul_2exp(1);
            &(&(&ctx.a1() * ctx.e()) - b) / x
        }
        FnName::F(23) => &(&(rp2 * f1) * ctx.k()).mul_2exp(1) + &(&ctx.a1() * ctx.e()),
        FnName::F(24) => &(&f25(ctx).mul_2exp(2) - &Approx::int(3, ctx.wp())) / x,
        FnName::F(25) => f25(ctx),
        FnName::F(_) => unreachable!("validated name"),
        FnName::G => {
            let c = Approx::rational(id.param().expect("validated"), ctx.wp());
            let lin = &ctx.c(3, 4) + &(&c * x);
            x * &(&(&lin * &ctx.l1()) - &ctx.l0())
        }
        FnName::Gn(1) => g1(ctx),
        FnName::Gn(2) => &g1(ctx) / &(x * &ctx.l1()),
        FnName::Gn(3) => &l0_minus(ctx) / &(x * &ctx.l1()),
        FnName::Gn(4) => &l0_minus(ctx) / x,
        FnName::Gn(_) => unreachable!("validated name"),
        FnName::SmallF => &(&(&ctx.l0() / &ctx.l1()) - &ctx.c(3, 4)) / x,
        FnName::BigG => &ctx.l0() / &ctx.l1(),
        FnName::H(1) => ctx.k() / f1,
        FnName::H(2) => h2(ctx, id.n()),
        FnName::H(3) => &h2(ctx, id.n()) / f1,
        FnName::H(4) => {
            let p3 = ctx.poly(&[(1, 1), (-1, 12), (-91, 2880)]);
            &(&(&p3 * ctx.pi()).mul_2exp(-1) - &(ctx.k() / f1)) / &x.powi(3)
        }
        FnName::H(5) => &ctx.two_over_pi() * &f1.pow_q(&q(79, 320)),
        FnName::H(6) => {
            let p = &ctx.poly(&[(0, 1), (1, 24), (91, 5760)]) * ctx.pi();
            &(ctx.k() / f1) + &p
        }
        FnName::H(7) => {
            let r = &ctx.arg.r;
            let poly = |cs: &[(i64, i64)]| {
                let mut acc = Approx::zero(ctx.wp());
                for &(n, d) in cs.iter().rev() {
                    acc = &(&acc * r) + &ctx.c(n, d);
                }
                acc
            };
            let rational = poly(&[(1, 1), (-1, 12), (0, 1), (-91, 2880), (0, 1), (-2549, 2880)]);
            &rational + &(&ctx.two_over_pi() * &(&ctx.rpow(5) - &one))
        }
        FnName::H(8) => {
            let r = &ctx.arg.r;
            let r3 = ctx.rpow(3);
            let a = (r * &ctx.t()).mul_q(&q(-1, 4));
            let b = &(&one - &r3.mul_q(&q(3, 4))) * f1;
            let c = &(&ctx.two_over_pi() * &(&r3 - &one)) * f1;
            &(&a + &b) + &c
        }
        FnName::H(9) => {
            let rat = ctx.poly(&[(1, 4), (-1, 12), (2069, 2880), (-2549, 2880)]);
            let pi_part = &ctx.two_over_pi() * &(&x.square() * rp2);
            &(&(&rat - &pi_part) * f1) - &ctx.c(1, 4)
        }
        FnName::H(10) => {
            let a = (&ctx.t() * x).mul_q(&q(1, 4));
            let b = &(x * &ctx.poly(&[(1, 12), (1, 45), (871, 48384)])) * f1;
            &a - &b
        }
        FnName::H(11) => &g1(ctx) / x,
        FnName::H(12) => &l0_minus(ctx) / &x.square(),
        FnName::H(13) => ctx.l0(),
        FnName::H(_) => unreachable!("validated name"),
    };
    Ok(v)
}
