//! `nctheta`: evaluate theta functions, tabulate structure constants, run
//! property checks and draw quivers. JSON on stdout, JSON errors on stderr.
//!
//! Exit codes: 0 success, 1 failed check, 2 bad input, 3 mathematical domain
//! error, 4 I/O error.

mod args;
mod verify;

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nctheta_core::error::Error;
use nctheta_core::io;
use nctheta_core::lattice::{LatticeValue, DEFAULT_TOL};
use nctheta_core::linalg::{ComplexSymMatrix, CosetIndex, IntSymMatrix, Quotient, SkewMatrix};
use nctheta_core::presets;
use nctheta_core::quiver::{build_quiver, enumerate_diag_symmetric, Quiver};
use nctheta_core::structure::{structure_tensor, LabelTriple};
use nctheta_core::theta::{e_comm, e_nc, theta_with_char, SiegelPoint, ThetaCharacteristics};
use serde_json::{json, Value};

const THREADS_VAR: &str = "NC_THETA_THREADS";

#[derive(Parser)]
#[command(name = "nctheta", version, about = "Theta functions on commutative and noncommutative tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single function value.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Tabulate the structure constants of a label triple.
    Structure(StructureArgs),
    /// Run a property check; exit 1 when it fails.
    Verify(VerifyArgs),
    /// Build the Hom-dimension quiver of a label set.
    Quiver(QuiverArgs),
}

#[derive(Subcommand)]
enum EvalCommand {
    /// Theta function with characteristics.
    Theta(ThetaArgs),
    /// Commutative basis function of a label pair.
    #[command(name = "e-comm")]
    ECommutative(PairArgs),
    /// Deformed basis function of a label pair.
    ENc(NcPairArgs),
}

#[derive(Args)]
struct ThetaArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Period matrix, e.g. "[[0,1]]" for the 1x1 matrix i.
    #[arg(long)]
    omega: String,
    /// Complex point, e.g. "[[0.1,0.2]]".
    #[arg(long)]
    z: String,
    /// First characteristic (rationals allowed); zero by default.
    #[arg(long)]
    c1: Option<String>,
    /// Second characteristic (rationals allowed); zero by default.
    #[arg(long)]
    c2: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Source label: an integer or a symmetric integer matrix.
    #[arg(long = "a")]
    a_a: String,
    /// Target label.
    #[arg(long = "b")]
    a_b: String,
    /// Coset representative, e.g. "0" or "[0,1]".
    #[arg(long)]
    mu: String,
    #[arg(long)]
    z: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct NcPairArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[command(flatten)]
    theta: ThetaFlags,
}

#[derive(Args)]
struct ThetaFlags {
    /// The (1,2) entry of a 2x2 skew matrix (rationals allowed).
    #[arg(long, allow_hyphen_values = true)]
    theta12: Option<String>,
    /// A full skew matrix as JSON rows.
    #[arg(long)]
    theta: Option<String>,
}

#[derive(Args)]
struct LabelFlags {
    #[arg(long)]
    n: Option<usize>,
    /// Labels: "0,1,3" or a JSON list of symmetric matrices.
    #[arg(long = "A", allow_hyphen_values = true)]
    labels: Option<String>,
    /// Named label set: sec5, line, line4, plane4.
    #[arg(long)]
    preset: Option<String>,
}

impl LabelFlags {
    fn resolve(&self) -> Result<Vec<IntSymMatrix>, Error> {
        args::label_list(self.preset.as_deref(), self.labels.as_deref(), self.n)
    }
}

#[derive(Args)]
struct StructureArgs {
    #[command(flatten)]
    labels: LabelFlags,
    #[command(flatten)]
    theta: ThetaFlags,
    /// Ignore any deformation and use the commutative constants.
    #[arg(long)]
    commutative: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    kind: verify::Kind,
    #[command(flatten)]
    labels: LabelFlags,
    #[command(flatten)]
    theta: ThetaFlags,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum QuiverFormat {
    Json,
    Dot,
}

#[derive(Args)]
struct QuiverArgs {
    /// Named label set, e.g. sec5.
    #[arg(long)]
    preset: Option<String>,
    /// Determinant of the enumerated diagonal 2x2 labels.
    #[arg(long, allow_hyphen_values = true)]
    det: Option<i64>,
    /// Entry bound of the enumeration window.
    #[arg(long)]
    bound: Option<i64>,
    /// Write the DOT graph to this file.
    #[arg(long)]
    dot: Option<String>,
    /// Format printed on stdout.
    #[arg(long, value_enum, default_value_t = QuiverFormat::Json)]
    format: QuiverFormat,
}

/// A failure with its exit code and JSON error object.
struct Failure {
    code: u8,
    error: String,
    detail: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } | Error::IndexModulusMismatch => 2,
            _ => 3,
        };
        Failure { code, error: e.code().to_string(), detail: e.to_string() }
    }
}

fn usage(detail: impl Into<String>) -> Failure {
    Failure { code: 2, error: "usage".into(), detail: detail.into() }
}

fn value_json(v: &LatticeValue, tol: f64) -> Value {
    json!({"value": io::complex_json(v.value), "tol": tol, "truncation_radius": v.radius})
}

fn check_n(n: Option<usize>, found: usize) -> Result<(), Error> {
    match n {
        Some(n) if n != found => Err(Error::DimensionMismatch { expected: n, found }),
        _ => Ok(()),
    }
}

fn coset(a_a: &IntSymMatrix, a_b: &IntSymMatrix, mu: &str) -> Result<CosetIndex, Error> {
    let d = nctheta_core::linalg::difference(a_a, a_b)?;
    let rep = args::int_vector(mu)?;
    if rep.len() != d.dim() {
        return Err(Error::DimensionMismatch { expected: d.dim(), found: rep.len() });
    }
    Ok(Quotient::new(&d)?.reduce(&rep))
}

fn eval(cmd: &EvalCommand) -> Result<Value, Failure> {
    match cmd {
        EvalCommand::Theta(t) => {
            let omega = SiegelPoint::new(ComplexSymMatrix::new(io::parse_complex_matrix(&io::parse_json(&t.omega)?)?)?)?;
            let n = omega.dim();
            check_n(t.n, n)?;
            let c1 = t.c1.as_deref().map(args::real_vector).transpose()?.unwrap_or_else(|| vec![0.0; n]);
            let c2 = t.c2.as_deref().map(args::real_vector).transpose()?.unwrap_or_else(|| vec![0.0; n]);
            let ch = ThetaCharacteristics::new(&c1, &c2)?;
            let v = theta_with_char(&ch, &omega, &args::complex_vector(&t.z)?, t.tol)?;
            Ok(value_json(&v, t.tol))
        }
        EvalCommand::ECommutative(p) => {
            let (a, b) = (args::label(&p.a_a)?, args::label(&p.a_b)?);
            check_n(p.n, a.dim())?;
            let mu = coset(&a, &b, &p.mu)?;
            let v = e_comm(&a, &b, &mu, &args::complex_vector(&p.z)?, p.tol)?;
            Ok(value_json(&v, p.tol))
        }
        EvalCommand::ENc(np) => {
            let p = &np.pair;
            let (a, b) = (args::label(&p.a_a)?, args::label(&p.a_b)?);
            check_n(p.n, a.dim())?;
            let theta = args::theta(a.dim(), np.theta.theta12.as_deref(), np.theta.theta.as_deref())?;
            let mu = coset(&a, &b, &p.mu)?;
            let v = e_nc(&a, &b, &mu, &args::complex_vector(&p.z)?, &theta, p.tol)?;
            Ok(value_json(&v, p.tol))
        }
    }
}

fn structure(s: &StructureArgs) -> Result<Value, Failure> {
    let [a, b, c] = args::exactly_three(s.labels.resolve()?)?;
    let n = a.dim();
    let theta = if s.commutative {
        SkewMatrix::zero(n)
    } else {
        args::theta(n, s.theta.theta12.as_deref(), s.theta.theta.as_deref())?
    };
    let triple = LabelTriple::new(a, b, c, theta)?;
    let tensor = structure_tensor(&triple, s.tol)?;
    let (p, q, r) = tensor.shape();
    Ok(json!({"shape": [p, q, r], "entries": tensor.to_json(), "tol": s.tol}))
}

fn run_verify(v: &VerifyArgs) -> Result<(bool, Value), Failure> {
    let labels = v.labels.resolve()?;
    let n = labels.first().map(IntSymMatrix::dim).unwrap_or(0);
    let theta = args::theta(n, v.theta.theta12.as_deref(), v.theta.theta.as_deref())?;
    if let Some(t) = v.tol {
        if t.is_nan() || t < 0.0 {
            return Err(usage("--tol must be nonnegative"));
        }
    }
    let opts = verify::Options { labels, theta, seed: v.seed, samples: v.samples, tol: v.tol };
    let (pass, mut report) = verify::run(v.kind, &opts)?;
    let kind = v.kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    report["check"] = json!(kind);
    report["seed"] = json!(v.seed);
    Ok((pass, report))
}

fn quiver(q: &QuiverArgs) -> Result<(Quiver, QuiverFormat), Failure> {
    let quiver = match (&q.preset, q.det, q.bound) {
        (Some(name), None, None) => {
            let labels = presets::labels(name).ok_or_else(|| usage(format!("unknown preset '{name}'")))?;
            build_quiver(&labels)?
        }
        (None, Some(det), Some(bound)) => {
            if bound <= 0 {
                return Err(usage("--bound must be positive"));
            }
            build_quiver(&enumerate_diag_symmetric(det, bound))?
        }
        _ => return Err(usage("give either --preset, or both --det and --bound")),
    };
    if let Some(path) = &q.dot {
        fs::write(path, quiver.to_dot())
            .map_err(|e| Failure { code: 4, error: "io_error".into(), detail: format!("{path}: {e}") })?;
    }
    Ok((quiver, q.format))
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("{THREADS_VAR} must be a positive integer, found '{text}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure { code: 4, error: "thread_pool".into(), detail: e.to_string() })
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string(value).expect("JSON values serialize"));
}

fn dispatch(cli: Cli) -> Result<ExitCode, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Eval(cmd) => emit(&eval(&cmd)?),
        Command::Structure(s) => emit(&structure(&s)?),
        Command::Verify(v) => {
            let (pass, report) = run_verify(&v)?;
            emit(&report);
            if !pass {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Quiver(q) => {
            let (quiver, format) = quiver(&q)?;
            match format {
                QuiverFormat::Json => emit(&quiver.to_json()),
                QuiverFormat::Dot => print!("{}", quiver.to_dot()),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let detail = e.render().to_string();
            eprintln!("{}", json!({"error": "usage", "detail": detail.trim()}));
            return ExitCode::from(2);
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", json!({"error": f.error, "detail": f.detail}));
            ExitCode::from(f.code)
        }
    }
}
