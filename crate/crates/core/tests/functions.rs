use ellint::functions::{eval_approx, fn_coeffs, FunctionId, Path};
use ellint::Constant;
use rug::{Float, Rational};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// `a_n = [(1/2)_n / n!]²` by its own recursion.
fn a(n: usize) -> Rational {
    let mut v = q(1, 1);
    for k in 1..=n as i64 {
        v *= q((2 * k - 1) * (2 * k - 1), 4 * k * k);
    }
    v
}

fn a_tilde(n: usize) -> Rational {
    q(3, 4 * (2 * n as i64 + 1)) - a(n)
}

fn coeffs(name: &str, n: usize) -> Vec<Constant> {
    let id: FunctionId = name.parse().unwrap();
    let (_, pre, c) = fn_coeffs(&id, n).unwrap();
    assert_eq!(pre, 0);
    c
}

fn rationals(name: &str, n: usize) -> Vec<Rational> {
    coeffs(name, n)
        .iter()
        .map(|c| c.as_rational().expect("rational coefficient"))
        .collect()
}

fn fl(s: &str) -> Float {
    ellint::approx::parse_decimal(s, 200).unwrap()
}

fn value(name: &str, r: &str) -> f64 {
    eval_approx(&name.parse().unwrap(), &fl(r), 96, Path::Auto)
        .unwrap()
        .to_f64()
}

#[test]
fn f18_is_half_pi_times_b() {
    let c = coeffs("f18", 16);
    for (n, cn) in c.iter().enumerate() {
        let b = q(2 * n as i64 + 8, 2 * n as i64 + 7) * a(n + 4)
            - q(1, 2) * a(n + 3)
            - q(1, 16) * a(n + 2)
            - q(1, 32) * a(n + 1);
        assert!(b > 0);
        assert_eq!(*cn, Constant::pi(b / 2), "n = {n}");
    }
    assert_eq!(c[0], Constant::pi(q(41, 4096)));
}

#[test]
fn f19_times_f0_is_b() {
    let c = rationals("f19", 12);
    for n in 0..12 {
        let conv: Rational = (0..=n).map(|k| Rational::from(&c[k] * &a(n - k))).sum();
        let b = q(2 * n as i64 + 8, 2 * n as i64 + 7) * a(n + 4)
            - q(1, 2) * a(n + 3)
            - q(1, 16) * a(n + 2)
            - q(1, 32) * a(n + 1);
        assert_eq!(conv, b, "n = {n}");
    }
}

#[test]
fn h4_times_arth_ratio_is_d_series() {
    let c: Vec<Rational> = coeffs("h4", 12)
        .iter()
        .map(|c| c.mul_pi_pow(-1).as_rational().unwrap())
        .collect();
    for n in 0..12usize {
        let conv: Rational = (0..=n)
            .map(|k| Rational::from(&c[k] * &q(1, 2 * (n - k) as i64 + 1)))
            .sum();
        let m = n as i64;
        let d = q(2 * m + 1, 1)
            * (q(
                10196 * m * m + 39096 * m + 34975,
                (2 * m + 7) * (2 * m + 5) * (2 * m + 3),
            ) - q(2880, 1) * a(n + 3));
        assert_eq!(conv, d / q(5760 * (2 * m + 1), 1), "n = {n}");
    }
}

#[test]
fn h2_coefficients_are_shifted_a_tilde() {
    for n in [1usize, 2, 5] {
        let c = rationals(&format!("h2:{n}"), 10);
        for (k, ck) in c.iter().enumerate() {
            assert_eq!(*ck, a_tilde(k + n + 1), "n = {n}, k = {k}");
            assert!(*ck > 0);
        }
    }
}

#[test]
fn arth_combinations_closed_forms() {
    for (n, c) in rationals("f1", 20).iter().enumerate() {
        let m = n as i64;
        assert_eq!(*c, q(2, (2 * m + 1) * (2 * m + 3)));
    }
    for (n, c) in rationals("f13", 20).iter().enumerate() {
        let m = n as i64;
        assert_eq!(
            *c,
            q(
                8 * (m + 1) * (2 * m + 1),
                (2 * m + 3) * (2 * m + 5) * (2 * m + 7)
            )
        );
    }
    for (n, c) in rationals("f14", 20).iter().enumerate() {
        let m = n as i64;
        assert_eq!(
            *c,
            q(
                2 * (4 * m * m + 20 * m + 13),
                (2 * m + 1) * (2 * m + 3) * (2 * m + 5)
            )
        );
    }
}

#[test]
fn comparison_differences_closed_forms() {
    let h10 = rationals("h10", 24);
    assert!(h10[..3].iter().all(|c| *c == 0));
    for n in 0..20usize {
        let m = n as i64;
        let num = 244712 * m * m * m + 749388 * m * m + 408406 * m - 161595;
        let den = (2 * m + 1) * (2 * m + 3) * (2 * m + 5) * (2 * m + 7);
        assert_eq!(
            Rational::from(&h10[n + 3] * 241920u32),
            q(num, den),
            "n = {n}"
        );
    }
    let h9 = coeffs("h9", 24);
    assert!(h9[0].is_zero() && h9[1].is_zero());
    for n in 0..20usize {
        let m = n as i64;
        let rat = q(m + 1, (2 * m + 3) * (2 * m + 5)) + q(2069, 960 * (2 * m + 1));
        let mut expect = &Constant::q(rat) - &Constant::inv_pi(q(6, 2 * m + 1));
        if n >= 1 {
            let second =
                &Constant::ratio(2549, 960 * (2 * m - 1)) - &Constant::inv_pi(q(6, 2 * m - 1));
            expect = &expect - &second;
        }
        assert_eq!(h9[n + 2].scale(&q(3, 1)), expect, "n = {n}");
    }
}

#[test]
fn values_against_elementary_oracles() {
    for r in [0.05f64, 0.3, 0.5, 0.9] {
        let rp2 = 1.0 - r * r;
        let f1 = (r - rp2 * r.atanh()) / r.powi(3);
        assert!(
            (value("f1", &r.to_string()) - f1).abs() < 1e-13 * f1,
            "f1 {r}"
        );
        let f11 = ((13.0 - 9.0 * r * r) * r.atanh() / r - 13.0 + 6.0 * r * r) / (r * r);
        assert!((value("f11", &r.to_string()) - f11).abs() < 1e-9, "f11 {r}");
    }
    let x: f64 = 0.49;
    let mut s = 0.0;
    let mut an = vec![1.0f64];
    for k in 1..600 {
        let p = an[k - 1] * ((2 * k - 1) as f64 / (2 * k) as f64).powi(2);
        an.push(p);
    }
    for n in 0..590 {
        let m = n as f64;
        let b = (2.0 * m + 8.0) / (2.0 * m + 7.0) * an[n + 4]
            - an[n + 3] / 2.0
            - an[n + 2] / 16.0
            - an[n + 1] / 32.0;
        s += b * x.powi(n as i32);
    }
    let f18 = std::f64::consts::FRAC_PI_2 * s;
    assert!(
        (value("f18", "0.7") - f18).abs() < 1e-13,
        "{} vs {f18}",
        value("f18", "0.7")
    );
}

#[test]
fn reference_values() {
    assert!((value("h1", "0.5") - 1.534_436_099_250_534_2).abs() < 1e-15);
    assert!((value("f", "0.1") - 0.003_150_844_691_741_963_6).abs() < 1e-17);
    let r: f64 = 0.01;
    assert!((value("h9", "0.01") * 3.0 / r.powi(4) - 0.311_955_039_064_206_4).abs() < 1e-12);
    assert!((value("h10", "0.01") * 241920.0 / r.powi(6) + 1538.8687).abs() < 1e-3);
    assert!((value("h9", "0.999999") + 0.24999).abs() < 1e-4);
    assert!((value("h10", "0.999999") - 0.66726).abs() < 1e-4);
}
