use ellint::approx::parse_decimal;
use ellint::bounds::{
    bound_point, check_bounds, crossover_r0, sharpness_witness, sign_change_scan, BoundFamily,
    FamilyKey, Sharpness, Side,
};
use ellint::verifier::{GridSpec, Status};
use ellint::PrecisionConfig;
use rug::{Float, Rational};

fn p128() -> PrecisionConfig {
    PrecisionConfig::new(128)
}

fn fam(s: &str) -> BoundFamily {
    s.parse().unwrap()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[test]
fn nesting_at_half() {
    let r = parse_decimal("0.5", 128).unwrap();
    let f0 = 1.685_750_354_812_596_f64 * 2.0 / std::f64::consts::PI;
    for f in BoundFamily::acceptance() {
        let p = bound_point(&f, &r, 128).unwrap();
        assert!(
            p.lower_margin.certainly_positive() && p.upper_margin.certainly_positive(),
            "{f}"
        );
        if f.key.target() == "2K/pi" {
            assert!((p.target.to_f64() - f0).abs() < 1e-15, "{f}");
            assert!(p.lower.to_f64() < f0 && f0 < p.upper.to_f64(), "{f}");
        }
    }
}

#[test]
fn chain_sharpening() {
    let grid = GridSpec::composite(300).unwrap();
    let aq = fam("AQ");
    let ineq1 = fam("Ineq1");
    let b1 = fam("Bound1OfK");
    for r in grid.points() {
        let a = bound_point(&aq, &r, 96).unwrap();
        let i = bound_point(&ineq1, &r, 96).unwrap();
        assert!(i.upper.value() <= a.upper.value(), "r = {r}");
        let base = bound_point(&b1, &r, 96).unwrap();
        for n in 1..=4 {
            let k = bound_point(&BoundFamily::karth1(n).unwrap(), &r, 96).unwrap();
            assert!(k.lower.value() >= base.lower.value(), "n = {n}, r = {r}");
        }
        for f in ["KArth2", "KArth3"] {
            let k = bound_point(&fam(f), &r, 96).unwrap();
            assert!(k.lower.value() >= base.lower.value(), "{f}, r = {r}");
        }
    }
}

#[test]
fn hardened_alpha_fails_near_zero() {
    let mut f = fam("Ineq1");
    f.lower_param = Some(ellint::Constant::ratio(1, 319));
    let rep = check_bounds(&f, &GridSpec::composite(200).unwrap(), &p128());
    assert_eq!(rep.status, Status::Fail);
    let r: f64 = rep.witness.unwrap().r.parse().unwrap();
    assert!(r < 1e-3, "{r}");
}

#[test]
fn sharpness() {
    let w = sharpness_witness(&fam("Ineq1"), Side::Lower, &q(1, 1000), &p128()).unwrap();
    let r = w.witness_r().expect("witness");
    assert!((0.05..=0.5).contains(&r), "{r}");
    let w = sharpness_witness(&fam("KArth3"), Side::Upper, &q(1, 1000), &p128()).unwrap();
    assert!(w.witness_r().is_some());
    match w {
        Sharpness::Witness { r, crossing, .. } => {
            let c: f64 = crossing.unwrap().parse().unwrap();
            assert!(r.parse::<f64>().unwrap() <= c && c < 0.5, "{c}");
        }
        _ => unreachable!(),
    }
    let w = sharpness_witness(&fam("Ineq1"), Side::Upper, &q(-1, 1000), &p128()).unwrap();
    assert!(matches!(w, Sharpness::NotReachable { .. }), "{w:?}");
    let w = sharpness_witness(&fam("KArth3"), Side::Lower, &q(-1, 1000), &p128()).unwrap();
    assert!(matches!(w, Sharpness::NotReachable { .. }), "{w:?}");
    assert!(sharpness_witness(&fam("AVV"), Side::Lower, &q(1, 1000), &p128()).is_err());
}

#[test]
fn crossover() {
    let c = crossover_r0(&p128()).unwrap();
    assert!((c.r0.to_f64() - 0.999_992_224_324_392_5).abs() < 1e-15);
    assert!(c.residual <= Float::with_val(64, 1) >> 124);
    let half = Float::with_val(256, &c.r0 / 2u32);
    let beyond = Float::with_val(256, Float::with_val(256, &c.r0 + 1u32) / 2u32);
    let i1 = fam("Ineq1");
    let i2 = fam("Ineq2");
    let a = bound_point(&i1, &half, 128).unwrap();
    let b = bound_point(&i2, &half, 128).unwrap();
    assert!((&a.lower - &b.lower).certainly_positive());
    let a = bound_point(&i1, &beyond, 128).unwrap();
    let b = bound_point(&i2, &beyond, 128).unwrap();
    assert!((&b.lower - &a.lower).certainly_positive());
}

#[test]
fn sign_scans() {
    let s = sign_change_scan(&"h9".parse().unwrap(), &p128()).unwrap();
    assert!(s.near_zero.positive && !s.near_one.positive);
    assert!(s.near_zero.lo < 1e-5 && s.near_one.hi > 1.0 - 1e-5);
    assert!(s.near_zero.hi < s.near_one.lo);
    let s = sign_change_scan(&"h10".parse().unwrap(), &p128()).unwrap();
    assert!(!s.near_zero.positive && s.near_one.positive);
}

#[test]
fn keys_cover_all_families() {
    assert_eq!(FamilyKey::ALL.len(), 14);
    assert_eq!(BoundFamily::acceptance().len(), 15);
    assert!(BoundFamily::conjectural()
        .iter()
        .all(|f| f.key.conjectural()));
}
