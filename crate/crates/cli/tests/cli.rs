use std::process::{Command, Output};

fn ellint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellint"))
        .args(args)
        .env_remove("ELLINT_PREC_BITS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn coeffs_of_f() {
    let o = ellint(&["coeffs", "--series", "f", "--order", "5"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(
        lines,
        [
            "1/320",
            "517/201600",
            "767341/387072000",
            "4277471797/2682408960000",
            "1851483120061/1394852659200000",
            "2989339649544551/2636271525888000000"
        ]
    );
    let again = ellint(&["coeffs", "--series", "f", "--order", "5"]);
    assert_eq!(o.stdout, again.stdout);
    let csv = stdout(&ellint(&[
        "coeffs", "--series", "h12", "--order", "2", "--format", "csv",
    ]));
    assert_eq!(csv.lines().next(), Some("n,coefficient"));
    assert!(csv.contains("0,517/604800"));
}

#[test]
fn eval_h1() {
    let o = ellint(&["eval", "--fn", "h1", "--r", "0.5", "--prec", "128"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let v: f64 = out
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((v - 1.534_436_099_250_534).abs() < 1e-14);
    assert!(out.contains("err_bound"));
}

#[test]
fn eval_with_param_and_csv() {
    let o = ellint(&[
        "eval", "--fn", "g", "--param", "1/4", "--r", "0.3", "--r", "0.6", "--format", "csv",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("r,value,err_bound"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn env_precision() {
    let o = Command::new(env!("CARGO_BIN_EXE_ellint"))
        .args(["eval", "--fn", "K", "--r", "0.5"])
        .env("ELLINT_PREC_BITS", "256")
        .output()
        .unwrap();
    assert!(o.status.success());
    let digits = stdout(&o)
        .lines()
        .next()
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .len();
    assert!(digits > 70, "{digits}");
    let bad = Command::new(env!("CARGO_BIN_EXE_ellint"))
        .args(["eval", "--fn", "K", "--r", "0.5"])
        .env("ELLINT_PREC_BITS", "8")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["eval", "--fn", "nope", "--r", "0.5"],
        vec!["eval", "--fn", "f", "--r", "1.5"],
        vec!["eval", "--fn", "g", "--r", "0.5"],
        vec!["bounds", "--r", "0.5", "--family", "Nope"],
        vec!["coeffs", "--series", "zz", "--order", "3"],
        vec!["verify", "--claim", "no/such/claim", "--grid", "100"],
    ] {
        let o = ellint(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(!err.trim().is_empty(), "{args:?}");
    }
}

#[test]
fn bounds_at_half() {
    let o = ellint(&[
        "bounds", "--r", "0.5", "--family", "Ineq1", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &v[0];
    let lower: f64 = row["lower"].as_str().unwrap().parse().unwrap();
    let value: f64 = row["value"].as_str().unwrap().parse().unwrap();
    let upper: f64 = row["upper"].as_str().unwrap().parse().unwrap();
    assert!(lower < value && value < upper);
    assert!((lower - 1.073_161_9).abs() < 1e-7);
    let all = stdout(&ellint(&["bounds", "--r", "0.5"]));
    assert!(all.lines().count() >= 18);
}

#[test]
fn verify_report_and_exit_code() {
    let path = std::env::temp_dir().join(format!("ellint-report-{}.json", std::process::id()));
    let o = ellint(&[
        "verify",
        "--suite",
        "acceptance",
        "--claim",
        "range/h4",
        "--grid",
        "300",
        "--report",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let body = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let v: serde_json::Value = serde_json::from_str(&body).unwrap();
    let reps = v.as_array().unwrap();
    let h4 = reps.iter().find(|r| r["claim_id"] == "range/h4").unwrap();
    assert_eq!(h4["status"], "pass");
    for key in [
        "claim_id",
        "status",
        "precision_bits",
        "min_margin",
        "witness",
        "elapsed_ms",
    ] {
        assert!(h4.get(key).is_some(), "{key}");
    }
    let ctl = reps
        .iter()
        .find(|r| r["claim_id"] == "control/c-increasing")
        .unwrap();
    assert_eq!(ctl["status"], "fail");
    assert_eq!(ctl["witness"]["r"], "n=0");
}

#[test]
fn verify_whole_acceptance_suite() {
    let o = ellint(&["verify", "--suite", "acceptance", "--grid", "1000"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out
        .lines()
        .any(|l| l.starts_with("PASS") && l.contains("bound/KArth1(4)")));
    assert!(out
        .lines()
        .any(|l| l.starts_with("NOT-REACHABLE") && l.contains("sharpness/Ineq1/upper")));
}

#[test]
fn crossover_and_scan() {
    let o = ellint(&["crossover"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("9.99992224324392"));
    let o = ellint(&["scan", "--target", "h10"]);
    let out = stdout(&o);
    assert!(o.status.success());
    assert!(out.lines().next().unwrap().contains("negative"));
    assert!(out.lines().nth(1).unwrap().contains("positive"));
}

#[test]
fn bench_prints_table() {
    let o = ellint(&["bench", "--reps", "16"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("K (AGM)") && out.contains("Ineq1"));
}
