//! The `spiderweb` command line.
//!
//! Exit codes: 0 success, 1 a verified inequality or identity is violated,
//! 2 parse or precondition error, 3 evaluation at a zero.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use spiderweb_core::curves::{level_curve, Curve};
use spiderweb_core::dynamics::{detect_rings, thresholds, EscapeParams, Window};
use spiderweb_core::modulus::{growth_profile, hadamard_threshold, log_max_modulus};
use spiderweb_core::subharmonic::{
    mean_profile, milloux_schmidt_check, poisson_bound_check, winding_mean_identity,
};
use spiderweb_core::theorems::{
    admissible_ta, cascade, theorem1_verify, theorem2_classify, Seed, Surrogates,
};
use spiderweb_core::{EntireProductFunction, Error, LogComplex};

use crate::formats::{self, Report, Verdict, CONSTANTS};
use crate::function_file::FunctionFile;
use crate::raster::raster_parallel;
use crate::suites;

#[derive(Parser, Debug)]
#[command(
    name = "spiderweb",
    version,
    about = "Winding, growth and escaping-set verification for entire functions with negative real zeros"
)]
pub struct Cli {
    /// Function-definition file (JSON).
    #[arg(long, global = true)]
    pub function: Option<PathBuf>,
    /// Output directory for reports, CSV and PGM files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed of the randomized test matrices.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for rasters (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print log|f(z)| and arg f(z) at each point.
    #[command(allow_negative_numbers = true)]
    Eval {
        /// Cartesian point `x,y` (repeatable).
        #[arg(long = "at", value_parser = parse_pair, allow_hyphen_values = true)]
        at: Vec<(f64, f64)>,
        /// Log-polar point `log|z|,arg z` (repeatable).
        #[arg(long = "log", value_parser = parse_pair, allow_hyphen_values = true)]
        log: Vec<(f64, f64)>,
    },
    /// Growth profile CSV (log r, log M, log m) with an order estimate.
    #[command(allow_negative_numbers = true)]
    Growth {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Run a verifier and write `<which>.json` to the output directory.
    Verify {
        which: Which,
        #[command(flatten)]
        params: VerifyParams,
    },
    /// Classify a square window `[-r, r]²` and report rings.
    #[command(allow_negative_numbers = true)]
    Raster {
        /// Half-width of the window.
        #[arg(long)]
        window: f64,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
        /// `log R` of the escape thresholds.
        #[arg(long = "log-R")]
        log_big_r: f64,
        #[arg(long, default_value_t = 6.0)]
        l: f64,
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Theorem1,
    Theorem2,
    Lemma34,
    Poisson,
    Milloux,
    Cascade,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedKind {
    Positive,
    Negative,
}

#[derive(Args, Debug, Clone, Serialize)]
#[command(next_help_heading = "Verifier parameters")]
pub struct VerifyParams {
    #[arg(long, allow_negative_numbers = true)]
    pub log_t: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Level `|f| = M^frac` of the generated curve.
    #[arg(long)]
    pub frac: Option<f64>,
    /// Curve CSV (`log_mod,arg`) instead of a generated level curve.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub log_s: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 2.0)]
    pub m_exp: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub log_r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub log_r0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub log_lambda: Option<f64>,
    /// Level `log M` for the Milloux-Schmidt check (default `log M(r)`).
    #[arg(long, allow_negative_numbers = true)]
    pub log_m_level: Option<f64>,
    /// Override the `R_0` surrogate (log).
    #[arg(long, allow_negative_numbers = true)]
    pub surrogate_r0: Option<f64>,
    /// Override the `R_1` surrogate (log).
    #[arg(long, allow_negative_numbers = true)]
    pub surrogate_r1: Option<f64>,
    /// Randomized cases for the poisson/milloux suites.
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
    #[arg(long = "seed-curve", value_enum, default_value = "positive")]
    pub seed_curve: SeedKind,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated numbers, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Why a command did not succeed, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Violated(String),
    Usage(String),
    Zero(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Violated(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Zero(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroFactor | Error::AtZero { .. } => Failure::Zero(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Violated(m) | Failure::Usage(m) | Failure::Zero(m)) = &f;
            eprintln!("spiderweb: {m}");
            f.code()
        }
    }
}

struct Loaded {
    spec: FunctionFile,
    f: EntireProductFunction,
}

fn load(cli: &Cli) -> Result<Loaded, Failure> {
    let path = cli
        .function
        .as_deref()
        .ok_or_else(|| Failure::Usage("--function FILE is required".into()))?;
    let spec = FunctionFile::load(path)?;
    let f = spec.build()?;
    Ok(Loaded { spec, f })
}

fn load_optional(cli: &Cli) -> Result<Option<Loaded>, Failure> {
    cli.function.as_ref().map(|_| load(cli)).transpose()
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Eval { at, log } => cmd_eval(&load(cli)?, at, log),
        Command::Growth { from, to, samples } => cmd_growth(&load(cli)?, *from, *to, *samples),
        Command::Verify { which, params } => cmd_verify(cli, *which, params),
        Command::Raster {
            window,
            width,
            height,
            log_big_r,
            l,
            n_max,
        } => cmd_raster(
            cli,
            &load(cli)?,
            Window::square(*window),
            (*width, *height),
            EscapeParams::new(*log_big_r, *l, *n_max),
        ),
    }
}

fn cmd_eval(fx: &Loaded, at: &[(f64, f64)], log: &[(f64, f64)]) -> Outcome {
    if at.is_empty() && log.is_empty() {
        return Err(Failure::Usage(
            "no points given (use --at x,y or --log r,θ)".into(),
        ));
    }
    let points = at
        .iter()
        .map(|&(x, y)| LogComplex::from_cartesian(x, y))
        .chain(log.iter().map(|&(m, t)| LogComplex::new(m, t)));
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "log_abs_z,arg_z,log_mod,arg")?;
    for z in points {
        let v = fx.f.eval_log(z)?;
        writeln!(out, "{},{},{},{}", z.log_mod, z.arg, v.log_mod, v.arg)?;
    }
    Ok(())
}

fn cmd_growth(fx: &Loaded, from: f64, to: f64, samples: usize) -> Outcome {
    if !(to > from) {
        return Err(Failure::Usage(format!("empty range [{from}, {to}]")));
    }
    let profile = growth_profile(&fx.f, from, to, samples)?;
    formats::write_growth_csv(&profile, io::stdout().lock())?;
    Ok(())
}

fn create(dir: &Path, name: &str) -> io::Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn need(v: Option<f64>, name: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required")))
}

fn load_curve(path: &Path) -> Result<Curve, Failure> {
    Ok(formats::read_curve_csv(File::open(path)?)?)
}

/// The verdict of one verification and its JSON body.
struct Verified {
    verdict: Verdict,
    result: serde_json::Value,
    message: String,
}

impl Verified {
    fn holds(ok: bool, result: serde_json::Value, message: String) -> Verified {
        Verified {
            verdict: if ok {
                Verdict::Holds
            } else {
                Verdict::Violated
            },
            result,
            message,
        }
    }

    fn precondition(result: serde_json::Value, message: String) -> Verified {
        Verified {
            verdict: Verdict::PreconditionFailed,
            result,
            message,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn cmd_verify(cli: &Cli, which: Which, p: &VerifyParams) -> Outcome {
    let fx = load_optional(cli)?;
    let v = match which {
        Which::Theorem1 => verify_theorem1(required(&fx)?, p)?,
        Which::Theorem2 => verify_theorem2(required(&fx)?, p)?,
        Which::Lemma34 => verify_lemma34(fx.as_ref(), p, &cli.out)?,
        Which::Poisson => verify_poisson(fx.as_ref(), p, cli.seed)?,
        Which::Milloux => verify_milloux(fx.as_ref(), p, cli.seed)?,
        Which::Cascade => verify_cascade(required(&fx)?, p)?,
    };
    let report = Report {
        command: format!("verify {}", to_value(&which).as_str().unwrap_or_default()),
        function: fx.as_ref().map(|l| l.spec.clone()),
        constants: CONSTANTS,
        params: json!({ "seed": cli.seed, "verifier": to_value(p) }),
        verdict: v.verdict,
        result: v.result,
    };
    let name = format!("{}.json", to_value(&which).as_str().unwrap_or("report"));
    let mut out = create(&cli.out, &name)?;
    report.write(&mut out)?;
    out.flush()?;
    println!("{}: {}", name, v.message);
    match v.verdict {
        Verdict::Holds => Ok(()),
        Verdict::Violated => Err(Failure::Violated(v.message)),
        Verdict::PreconditionFailed => Err(Failure::Usage(v.message)),
    }
}

fn required(fx: &Option<Loaded>) -> Result<&Loaded, Failure> {
    fx.as_ref()
        .ok_or_else(|| Failure::Usage("--function FILE is required".into()))
}

fn verify_theorem1(fx: &Loaded, p: &VerifyParams) -> Result<Verified, Failure> {
    let log_t = need(p.log_t, "log-t")?;
    let a = need(p.a, "a")?;
    let log_r1 = match p.surrogate_r1 {
        Some(v) => v,
        None => hadamard_threshold(&fx.f, 0.5, log_t.max(1.0), 2.0, 32)?.unwrap_or(f64::INFINITY),
    };
    if !admissible_ta(log_t, a, log_r1) {
        return Ok(Verified::precondition(
            json!({ "log_t": log_t, "a": a, "log_r1": log_r1, "admissible": false }),
            format!("(log t, a) = ({log_t}, {a}) is not admissible"),
        ));
    }
    let curve = match &p.curve {
        Some(path) => load_curve(path)?,
        None => suites::theorem1_curve(&fx.f, log_t, a, p.frac.unwrap_or(0.5))?,
    };
    let cert = match theorem1_verify(&fx.f, &curve, log_t, a, log_r1) {
        Ok(c) => c,
        Err(
            e @ (Error::PreconditionFailed(_)
            | Error::HypothesisViolated { .. }
            | Error::NotCrossing),
        ) => {
            return Ok(Verified::precondition(
                json!({ "error": e.to_string() }),
                e.to_string(),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let ok = cert.passed == Some(true);
    let message = format!(
        "measured Δarg {:.6e} + budget {:.3e} vs bound {:.6e} (margin {:.6e})",
        cert.measured_delta_arg,
        cert.tail_budget,
        cert.lower_bound,
        cert.margin()
    );
    let mut result = to_value(&cert);
    result["margin"] = json!(cert.margin());
    result["log_r1"] = json!(log_r1);
    Ok(Verified::holds(ok, result, message))
}

fn surrogates_for(
    f: &EntireProductFunction,
    p: &VerifyParams,
    log_hi: f64,
) -> Result<Surrogates, Failure> {
    let est = match (p.surrogate_r0, p.surrogate_r1) {
        (Some(log_r0), Some(log_r1)) => return Ok(Surrogates { log_r0, log_r1 }),
        _ => suites::estimate_surrogates(f, 0.5 * log_hi, log_hi, p.m_exp, 8)?,
    };
    Ok(Surrogates {
        log_r0: p.surrogate_r0.unwrap_or(est.log_r0),
        log_r1: p.surrogate_r1.unwrap_or(est.log_r1),
    })
}

fn verify_theorem2(fx: &Loaded, p: &VerifyParams) -> Result<Verified, Failure> {
    let log_s = need(p.log_s, "log-s")?;
    let l = need(p.l, "l")?;
    let surrogates = surrogates_for(&fx.f, p, log_s)?;
    let curve = match &p.curve {
        Some(path) => load_curve(path)?,
        None => {
            let level = p.frac.unwrap_or(1.0) * log_max_modulus(&fx.f, log_s)?;
            level_curve(&fx.f, log_s, l * log_s, level, 600)?
        }
    };
    let r = match theorem2_classify(&fx.f, &curve, log_s, l, p.b, p.m_exp, &surrogates) {
        Ok(r) => r,
        Err(
            e @ (Error::PreconditionFailed(_)
            | Error::HypothesisViolated { .. }
            | Error::NotCrossing),
        ) => {
            return Ok(Verified::precondition(
                json!({ "error": e.to_string(), "surrogates": to_value(&surrogates) }),
                e.to_string(),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let ok = r.certificate().is_none_or(|c| c.passed == Some(true));
    let message = match r.certificate() {
        Some(c) => format!("case 3, winding margin {:.6e}", c.margin()),
        None => format!("case {}", r.case),
    };
    Ok(Verified::holds(
        ok,
        json!({ "surrogates": to_value(&surrogates), "trichotomy": to_value(&r) }),
        message,
    ))
}

fn verify_lemma34(fx: Option<&Loaded>, p: &VerifyParams, out: &Path) -> Result<Verified, Failure> {
    if let (Some(fx), Some(log_r), Some(log_lambda)) = (fx, p.log_r, p.log_lambda) {
        let (lhs, rhs) = winding_mean_identity(&fx.f, log_r, log_lambda)?;
        let rel = (lhs - rhs).abs() / lhs.abs().max(1.0);
        let profile = mean_profile(&fx.f, log_lambda, log_r - 1.0, log_r + 1.0, 21)?;
        let mut csv = create(out, "mean_profile.csv")?;
        formats::write_mean_csv(&profile, &mut csv)?;
        csv.flush()?;
        let result = json!({ "log_r": log_r, "log_lambda": log_lambda, "lhs": lhs, "rhs": rhs,
                             "rel_err": rel, "tol": 0.02, "mean_profile": to_value(&profile) });
        return Ok(Verified::holds(
            rel <= 0.02,
            result,
            format!("Δarg {lhs:.8} vs 2π rT' {rhs:.8} (relative error {rel:.2e})"),
        ));
    }
    let rows = suites::lemma34_matrix()?;
    let bad = rows.iter().filter(|r| !r.ok).count();
    Ok(Verified::holds(
        bad == 0,
        json!({ "rows": to_value(&rows) }),
        format!("{} rows, {} outside tolerance", rows.len(), bad),
    ))
}

fn verify_poisson(fx: Option<&Loaded>, p: &VerifyParams, seed: u64) -> Result<Verified, Failure> {
    if let (Some(fx), Some(log_r), Some(log_r0)) = (fx, p.log_r, p.log_r0) {
        let log_lambda = p.log_lambda.unwrap_or(0.0);
        let c = match poisson_bound_check(&fx.f, log_r, log_r0, log_lambda) {
            Ok(c) => c,
            Err(e @ Error::InvalidArgument(_)) => {
                return Ok(Verified::precondition(
                    json!({ "error": e.to_string() }),
                    e.to_string(),
                ))
            }
            Err(e) => return Err(e.into()),
        };
        let message = format!(
            "T(r) {:.6e} <= B(r) {:.6e} <= {:.4} T(r0) {:.6e}",
            c.t_r, c.b_r, c.factor, c.t_r0
        );
        return Ok(Verified::holds(c.holds, to_value(&c), message));
    }
    let rows = suites::poisson_suite(seed, p.cases)?;
    let bad = rows.iter().filter(|r| !r.holds).count();
    Ok(Verified::holds(
        bad == 0,
        json!({ "rows": to_value(&rows) }),
        format!("{} cases, {} violations", rows.len(), bad),
    ))
}

fn verify_milloux(fx: Option<&Loaded>, p: &VerifyParams, seed: u64) -> Result<Verified, Failure> {
    if let (Some(fx), Some(log_r), Some(log_r0)) = (fx, p.log_r, p.log_r0) {
        let level = match p.log_m_level {
            Some(v) => v,
            None => log_max_modulus(&fx.f, log_r)?,
        };
        let c = match milloux_schmidt_check(&fx.f, log_r, log_r0, level) {
            Ok(c) => c,
            Err(e @ (Error::InvalidArgument(_) | Error::HypothesisUnmet { .. })) => {
                return Ok(Verified::precondition(
                    json!({ "error": e.to_string() }),
                    e.to_string(),
                ))
            }
            Err(e) => return Err(e.into()),
        };
        let message = format!("B(r) {:.6e} <= {:.4} B(r0) {:.6e}", c.b_r, c.factor, c.b_r0);
        return Ok(Verified::holds(c.holds, to_value(&c), message));
    }
    let rows = suites::milloux_suite(seed, p.cases)?;
    let bad = rows.iter().filter(|r| !r.holds).count();
    Ok(Verified::holds(
        bad == 0,
        json!({ "rows": to_value(&rows) }),
        format!("{} cases, {} violations", rows.len(), bad),
    ))
}

fn verify_cascade(fx: &Loaded, p: &VerifyParams) -> Result<Verified, Failure> {
    let log_r0 = need(p.log_r0, "log-r0")?;
    let l = p.m_exp + 4.0;
    let surrogates = surrogates_for(&fx.f, p, log_r0)?;
    let seed = match p.seed_curve {
        SeedKind::Positive => Seed::PositiveRay,
        SeedKind::Negative => Seed::Curve(Curve::log_segment(
            LogComplex::new(log_r0, std::f64::consts::PI),
            LogComplex::new(l * log_r0, std::f64::consts::PI),
            256,
        )),
    };
    let report = match cascade(&fx.f, &seed, log_r0, p.m_exp, &surrogates, p.steps) {
        Ok(r) => r,
        Err(e @ (Error::PreconditionFailed(_) | Error::NotCrossing)) => {
            return Ok(Verified::precondition(
                json!({ "error": e.to_string() }),
                e.to_string(),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let ok = report
        .steps
        .iter()
        .all(|s| s.mu_ok != Some(false) && s.growth_ok);
    let message = format!(
        "{} steps, longest stretch run {}, wind event: {}",
        report.steps.len(),
        report.stretch_run(),
        report.wound()
    );
    let mut result = to_value(&report);
    result["stretch_run"] = json!(report.stretch_run());
    result["wound"] = json!(report.wound());
    Ok(Verified::holds(ok, result, message))
}

fn cmd_raster(
    cli: &Cli,
    fx: &Loaded,
    window: Window,
    (width, height): (usize, usize),
    params: EscapeParams,
) -> Outcome {
    let th = thresholds(&fx.f, params)?;
    let grid = raster_parallel(&fx.f, window, width, height, &th, cli.threads)?;
    let mut pgm = create(&cli.out, "raster.pgm")?;
    formats::write_pgm(&grid, &mut pgm)?;
    pgm.flush()?;
    let analysis = detect_rings(&grid, &params)?;
    let mut csv = create(&cli.out, "rings.csv")?;
    formats::write_rings_csv(&analysis, &mut csv)?;
    csv.flush()?;
    let surrounding = analysis.rings.iter().filter(|r| r.surrounds_origin).count();
    println!(
        "raster {width}x{height}: {} rings ({} around the origin), {} holes",
        analysis.rings.len(),
        surrounding,
        analysis.holes.len()
    );
    Ok(())
}
