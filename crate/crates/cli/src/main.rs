use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use ellint::approx::{float_to_decimal, Approx, EvalResult};
use ellint::bounds::{bound_point, crossover_r0, sign_change_scan, BoundFamily};
use ellint::ell::{ell_e, ell_k, ell_k_agm};
use ellint::exact::{fmt_rational, named_series, NamedSeries};
use ellint::functions::{fn_coeffs, fn_eval, FunctionId};
use ellint::verifier::{run_suite, suite_passed, GridSpec, Suite, SuiteOptions};
use ellint::{Error, Modulus, PrecisionConfig};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "ellint",
    version,
    about = "Certified evaluation of K, E and related functions, their series and inequalities"
)]
struct Cli {
    /// Working precision in bits (64..=4096).
    #[arg(long, global = true, env = "ELLINT_PREC_BITS")]
    prec: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Acceptance,
    Conjecture,
    Full,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a function (or K, E) at one or more points.
    Eval {
        /// Function id, e.g. `h1`, `g:1/4`, `h2:3`, `K`, `E`.
        #[arg(long = "fn")]
        func: String,
        /// Argument as a decimal; may be repeated.
        #[arg(long)]
        r: Vec<String>,
        /// Parameter `n` or `c` for parametrised functions.
        #[arg(long)]
        param: Option<String>,
        /// Evaluate on a composite grid of this many points instead of `--r`.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exact Maclaurin coefficients `0..=order`.
    Coeffs {
        /// `f`, `G`, `h11`, `h12`, `h13` or `f7`.
        #[arg(long, conflicts_with = "func")]
        series: Option<String>,
        /// Any registered function id.
        #[arg(long = "fn")]
        func: Option<String>,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Bounds and target at `r`.
    Bounds {
        #[arg(long)]
        r: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "acceptance")]
        suite: SuiteArg,
        /// Claim id or prefix such as `monotone/f` or `bound`.
        #[arg(long)]
        claim: Option<String>,
        /// Points of the composite grid.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Write the JSON report array here.
        #[arg(long)]
        report: Option<String>,
    },
    /// The point where the two exponent bounds trade places.
    Crossover,
    /// Certified sign intervals of `h9` or `h10` near both ends.
    Scan {
        #[arg(long)]
        target: String,
    },
    /// Time bound evaluation against the AGM reference.
    Bench {
        #[arg(long, default_value_t = 200)]
        reps: usize,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownFunction(_)
            | Error::UnknownFamily(_)
            | Error::UnknownSeries(_)
            | Error::ParamRequired(_)
            | Error::ParamOutOfRange(_)
            | Error::Parse(_)
            | Error::Domain(_)
            | Error::NoSuchClaim(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Out<T = ()> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let prec = match cli.prec {
        Some(b) => PrecisionConfig::checked(b),
        None => PrecisionConfig::from_env(),
    };
    let res = prec.map_err(Failure::from).and_then(|p| run(cli.cmd, &p));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => {
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd, prec: &PrecisionConfig) -> Out {
    match cmd {
        Cmd::Eval {
            func,
            r,
            param,
            points,
            format,
        } => eval(&func, &r, param, points, format, prec),
        Cmd::Coeffs {
            series,
            func,
            order,
            format,
        } => coeffs(series, func, order, format),
        Cmd::Bounds { r, family, format } => bounds(&r, family, format, prec),
        Cmd::Verify {
            suite,
            claim,
            grid,
            report,
        } => verify(suite, claim, grid, report, prec),
        Cmd::Crossover => {
            let c = crossover_r0(prec)?;
            println!(
                "r0       {}",
                c.r0.to_string_radix(10, Some(ellint::approx::decimal_digits(prec.bits)))
            );
            println!("residual {}", c.residual.to_string_radix(10, Some(6)));
            Ok(())
        }
        Cmd::Scan { target } => {
            let s = sign_change_scan(&target.parse()?, prec)?;
            let sgn = |p: bool| if p { "positive" } else { "negative" };
            println!(
                "{} {} on [{:e}, {}]",
                s.target,
                sgn(s.near_zero.positive),
                s.near_zero.lo,
                s.near_zero.hi
            );
            println!(
                "{} {} on [{}, {}]",
                s.target,
                sgn(s.near_one.positive),
                s.near_one.lo,
                s.near_one.hi
            );
            Ok(())
        }
        Cmd::Bench { reps } => bench(reps, prec),
    }
}

enum Target {
    K,
    E,
    Fn(FunctionId),
}

fn target(func: &str, param: Option<String>) -> Out<Target> {
    Ok(match (func, param) {
        ("K", None) => Target::K,
        ("E", None) => Target::E,
        ("K" | "E", Some(_)) => return Err(Failure::Usage(format!("`{func}` takes no parameter"))),
        (f, Some(p)) => Target::Fn(format!("{f}:{p}").parse()?),
        (f, None) => Target::Fn(f.parse()?),
    })
}

fn eval(
    func: &str,
    rs: &[String],
    param: Option<String>,
    points: Option<usize>,
    format: Format,
    prec: &PrecisionConfig,
) -> Out {
    let t = target(func, param)?;
    let mods: Vec<Modulus> = match points {
        Some(n) => GridSpec::composite(n)?
            .points()
            .into_iter()
            .map(Modulus::new)
            .collect::<Result<_, _>>()?,
        None if rs.is_empty() => return Err(Failure::Usage("eval needs --r or --points".into())),
        None => rs
            .iter()
            .map(|s| Modulus::parse(s, prec.bits))
            .collect::<Result<_, _>>()?,
    };
    let mut rows = Vec::with_capacity(mods.len());
    for m in &mods {
        let v = match &t {
            Target::K => ell_k(m, prec)?,
            Target::E => ell_e(m, prec)?,
            Target::Fn(id) => fn_eval(id, m, prec)?,
        };
        rows.push((float_to_decimal(m.r()), v));
    }
    let mut out = std::io::stdout().lock();
    match format {
        Format::Text => {
            for (r, v) in &rows {
                if rows.len() > 1 {
                    writeln!(out, "r         {r}")?;
                }
                writeln!(out, "value     {}", v.value_string())?;
                writeln!(out, "err_bound {}", v.err_string())?;
            }
        }
        Format::Csv => {
            writeln!(out, "r,value,err_bound")?;
            for (r, v) in &rows {
                writeln!(out, "{r},{},{}", v.value_string(), v.err_string())?;
            }
        }
        Format::Json => {
            let a: Vec<_> = rows
                .iter()
                .map(|(r, v)| json!({"r": r, "value": v.value_string(), "err_bound": v.err_string(), "terms_used": v.terms_used}))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&a).expect("serialisable")
            )?;
        }
    }
    Ok(())
}

fn coeffs(series: Option<String>, func: Option<String>, order: usize, format: Format) -> Out {
    let list: Vec<String> = match (series, func) {
        (Some(s), _) => {
            let name: NamedSeries = s.parse()?;
            named_series(name, order.max(1))?.coeffs()[..=order]
                .iter()
                .map(fmt_rational)
                .collect()
        }
        (None, Some(f)) => {
            let id: FunctionId = f.parse()?;
            let (var, pre, c) = fn_coeffs(&id, order + 1)?;
            if pre > 0 {
                eprintln!("note: multiplied by r^{pre}; variable {var:?}");
            }
            c.iter().map(|c| c.to_string()).collect()
        }
        (None, None) => return Err(Failure::Usage("coeffs needs --series or --fn".into())),
    };
    let mut out = std::io::stdout().lock();
    match format {
        Format::Text => {
            for c in &list {
                writeln!(out, "{c}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "n,coefficient")?;
            for (n, c) in list.iter().enumerate() {
                writeln!(out, "{n},{c}")?;
            }
        }
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string(&list).expect("serialisable")
        )?,
    }
    Ok(())
}

fn short(a: &Approx, digits: usize) -> String {
    a.value().to_string_radix(10, Some(digits))
}

fn bounds(r: &str, family: Option<String>, format: Format, prec: &PrecisionConfig) -> Out {
    let m = Modulus::parse(r, prec.bits)?;
    let fams: Vec<BoundFamily> = match family {
        Some(f) => vec![f.parse()?],
        None => BoundFamily::acceptance()
            .into_iter()
            .chain(BoundFamily::conjectural())
            .collect(),
    };
    let digits = ellint::approx::decimal_digits(prec.bits);
    let mut rows = Vec::new();
    for f in &fams {
        let p = bound_point(f, m.r(), prec.bits)?;
        rows.push((f.to_string(), f.key.target(), p));
    }
    let mut out = std::io::stdout().lock();
    match format {
        Format::Json => {
            let a: Vec<_> = rows
                .iter()
                .map(|(f, t, p)| {
                    json!({
                        "family": f, "target": t,
                        "lower": short(&p.lower, digits), "value": short(&p.target, digits), "upper": short(&p.upper, digits),
                        "lower_margin": short(&p.lower_margin, 12), "upper_margin": short(&p.upper_margin, 12),
                    })
                })
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&a).expect("serialisable")
            )?;
        }
        Format::Csv => {
            writeln!(
                out,
                "family,target,lower,value,upper,lower_margin,upper_margin"
            )?;
            for (f, t, p) in &rows {
                writeln!(
                    out,
                    "{f},{t},{},{},{},{},{}",
                    short(&p.lower, digits),
                    short(&p.target, digits),
                    short(&p.upper, digits),
                    short(&p.lower_margin, 12),
                    short(&p.upper_margin, 12)
                )?;
            }
        }
        Format::Text => {
            writeln!(
                out,
                "{:<12} {:<14} {:>22} {:>22} {:>22}",
                "family", "target", "lower", "value", "upper"
            )?;
            for (f, t, p) in &rows {
                writeln!(
                    out,
                    "{f:<12} {t:<14} {:>22} {:>22} {:>22}",
                    short(&p.lower, 18),
                    short(&p.target, 18),
                    short(&p.upper, 18)
                )?;
            }
        }
    }
    Ok(())
}

fn verify(
    suite: SuiteArg,
    claim: Option<String>,
    grid: usize,
    report: Option<String>,
    prec: &PrecisionConfig,
) -> Out {
    let suite = match suite {
        SuiteArg::Acceptance => Suite::Acceptance,
        SuiteArg::Conjecture => Suite::Conjecture,
        SuiteArg::Full => Suite::Full,
    };
    let opt = SuiteOptions::default().with_grid_points(grid)?;
    let reps = run_suite(suite, prec, &opt, claim.as_deref())?;
    let mut out = std::io::stdout().lock();
    for r in &reps {
        writeln!(out, "{}", r.line())?;
    }
    if let Some(path) = report {
        let body = serde_json::to_string_pretty(&reps).expect("serialisable");
        if path == "-" {
            writeln!(out, "{body}")?;
        } else {
            std::fs::write(&path, body)?;
        }
    }
    if suite_passed(&reps) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn bench(reps: usize, prec: &PrecisionConfig) -> Out {
    let n = reps.max(16);
    let pts: Vec<Modulus> = GridSpec::composite(n)?
        .points()
        .into_iter()
        .map(Modulus::new)
        .collect::<Result<_, _>>()?;
    let rate = |secs: f64| {
        if secs > 0.0 {
            pts.len() as f64 / secs
        } else {
            f64::INFINITY
        }
    };
    let t = Instant::now();
    for m in &pts {
        let _: EvalResult = ell_k_agm(m, prec)?;
    }
    let agm = t.elapsed().as_secs_f64();
    println!("{:<12} {:>12} {:>14}", "evaluator", "evals/s", "vs AGM K");
    println!("{:<12} {:>12.0} {:>14.2}", "K (AGM)", rate(agm), 1.0);
    for f in BoundFamily::acceptance() {
        let t = Instant::now();
        for m in &pts {
            bound_point(&f, m.r(), prec.bits)?;
        }
        let s = t.elapsed().as_secs_f64();
        println!("{:<12} {:>12.0} {:>14.2}", f.to_string(), rate(s), s / agm);
    }
    Ok(())
}
