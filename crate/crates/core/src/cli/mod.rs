//! Command-line front end shared by the `qspline` binary.
//!
//! | command  | input                                   | output                         |
//! |----------|-----------------------------------------|--------------------------------|
//! | `fit`    | dataset (CSV + boundary flags, or JSON) | model document (JSON)          |
//! | `eval`   | model document + `--grid lo,hi,count`   | CSV `x,s`                      |
//! | `sweep`  | polynomial, knots, q list               | CSV `q,sup_error,l2_error,status` |
//! | `verify` | model document, or dataset + `--q`      | verification report (JSON)     |
//!
//! Exit codes: 0 ok, 1 internal, 2 malformed input, 3 singular system,
//! 4 out of domain, 5 verification failed.

pub mod dataset;
pub mod document;
pub mod sweep;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::oracle::{verify_model, DEFAULT_VERIFY_TOL};
use crate::poly::Polynomial;
use crate::qcalc::QParam;
use crate::spline::{fit, QSplineModel};

pub use dataset::{parse_dataset, parse_dataset_csv, parse_dataset_json};
pub use document::{Boundary, ModelDocument, PieceDocument, FORMAT_VERSION};
pub use sweep::{grid, run_sweep, SweepRow, SweepStatus};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_OUT_OF_DOMAIN: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Malformed user input, optionally tied to a line of the input file.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct InputError {
    pub line: Option<usize>,
    pub message: String,
}

impl InputError {
    pub fn new(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Singular(Error),
    #[error("{0}")]
    OutOfDomain(Error),
    #[error("verification failed: {0} condition(s) out of tolerance")]
    VerificationFailed(usize),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Singular(_) => EXIT_SINGULAR,
            CliError::OutOfDomain(_) => EXIT_OUT_OF_DOMAIN,
            CliError::VerificationFailed(_) => EXIT_VERIFY_FAILED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularSystem { .. } => CliError::Singular(e),
            Error::OutOfDomain { .. } => CliError::OutOfDomain(e),
            Error::InvalidData(_) | Error::InvalidQ(_) => CliError::Input(InputError::new(e.to_string())),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qspline", version, about = "Clamped cubic q-spline interpolation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a q-spline to a dataset and print the model document.
    Fit(FitArgs),
    /// Evaluate a model on an equally spaced grid.
    Eval(EvalArgs),
    /// Fit a sampled polynomial for several q and report interpolation errors.
    Sweep(SweepArgs),
    /// Check every spline condition of a model (or of a fresh fit).
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    /// Prescribed q-derivative at the first knot (CSV input only).
    #[arg(long, allow_negative_numbers = true)]
    pub dq_left: Option<f64>,
    /// Prescribed q-derivative at the last knot (CSV input only).
    #[arg(long, allow_negative_numbers = true)]
    pub dq_right: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Dataset: `x,f` CSV, or JSON with knots, values and boundary.
    pub input: PathBuf,
    #[arg(long)]
    pub q: f64,
    #[command(flatten)]
    pub boundary: BoundaryArgs,
    /// Write the model here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Model document produced by `fit`.
    pub model: PathBuf,
    /// `lo,hi,count`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Evaluate outside the knot range with the nearest end piece.
    #[arg(long)]
    pub extrapolate: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Ascending polynomial coefficients, e.g. `0,0,0,0,1` for x^4.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Strictly increasing knots, e.g. `-1,0,1`.
    #[arg(long, allow_hyphen_values = true)]
    pub knots: String,
    /// Comma-separated q values.
    #[arg(long)]
    pub q: String,
    /// Number of grid points for the error measurement.
    #[arg(long, default_value_t = 2001)]
    pub grid: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Model document, or a dataset when `--q` is given.
    pub input: PathBuf,
    /// Fit the dataset at this q and verify the result.
    #[arg(long)]
    pub q: Option<f64>,
    #[command(flatten)]
    pub boundary: BoundaryArgs,
    #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
    pub tol: f64,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Results go to `out` unless redirected to
/// a file; diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return if code == 0 { EXIT_OK } else { EXIT_INPUT };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Fit(args) => cmd_fit(&args, out),
        Command::Eval(args) => cmd_eval(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
    }
}

fn emit(output: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn parse_q(q: f64) -> Result<QParam, CliError> {
    QParam::new(q).map_err(|e| InputError::new(e.to_string()).into())
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, InputError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| InputError::new(format!("cannot parse {what} entry `{t}`")))
        })
        .collect()
}

fn load_model(path: &Path) -> Result<QSplineModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
    Ok(ModelDocument::from_json(&text)?.to_model()?)
}

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let q = parse_q(args.q)?;
    let data = parse_dataset(&args.input, args.boundary.dq_left, args.boundary.dq_right)?;
    let model = fit(&data, q)?;
    let mut json = ModelDocument::from_model(&model).to_json();
    json.push('\n');
    emit(args.output.as_deref(), out, &json)
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let spec = args.grid.split(',').collect::<Vec<_>>();
    let [lo, hi, count] = spec.as_slice() else {
        return Err(InputError::new("--grid expects lo,hi,count").into());
    };
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| InputError::new(format!("bad grid lower bound `{lo}`")))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| InputError::new(format!("bad grid upper bound `{hi}`")))?;
    let count: usize = count
        .trim()
        .parse()
        .map_err(|_| InputError::new(format!("bad grid count `{count}`")))?;
    if count == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(InputError::new("--grid needs finite lo <= hi and count >= 1").into());
    }

    let mut csv = String::from("x,s\n");
    for x in grid(lo, hi, count) {
        let s = model.evaluate_with(x, args.extrapolate)?;
        csv.push_str(&format!("{x:?},{s:?}\n"));
    }
    emit(args.output.as_deref(), out, &csv)
}

// CSV numbers use `{:?}`: shortest round-trip digits, switching to
// exponent notation for very small or large magnitudes.

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let coeffs = parse_list(&args.poly, "--poly")?;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(InputError::new("--poly coefficients must be finite").into());
    }
    let poly = Polynomial::new(coeffs);
    let knots = parse_list(&args.knots, "--knots")?;
    let qs = parse_list(&args.q, "--q")?
        .into_iter()
        .map(parse_q)
        .collect::<Result<Vec<_>, _>>()?;
    let rows = run_sweep(&poly, &knots, &qs, args.grid)?;

    let fmt_opt = |v: Option<f64>| v.map(|v| format!("{v:?}")).unwrap_or_default();
    let mut csv = String::from("q,sup_error,l2_error,status\n");
    for row in rows {
        let status = match row.status {
            SweepStatus::Fitted => "fitted",
            SweepStatus::Singular => "singular",
        };
        csv.push_str(&format!(
            "{:?},{},{},{status}\n",
            row.q,
            fmt_opt(row.sup_error),
            fmt_opt(row.l2_error)
        ));
    }
    emit(args.output.as_deref(), out, &csv)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if !(args.tol > 0.0) {
        return Err(InputError::new("--tol must be positive").into());
    }
    let model = match args.q {
        Some(q) => {
            let q = parse_q(q)?;
            let data = parse_dataset(&args.input, args.boundary.dq_left, args.boundary.dq_right)?;
            fit(&data, q)?
        }
        None => {
            if args.boundary.dq_left.is_some() || args.boundary.dq_right.is_some() {
                return Err(InputError::new("boundary flags need --q and a dataset").into());
            }
            load_model(&args.input)?
        }
    };
    let report = verify_model(&model, args.tol);
    let mut json = serde_json::to_string_pretty(&report)
        .map_err(|e| CliError::Internal(e.to_string()))?;
    json.push('\n');
    emit(args.output.as_deref(), out, &json)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(report.failures().count()))
    }
}
