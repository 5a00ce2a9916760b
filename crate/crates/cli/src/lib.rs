//! `vasculo` command-line front end. Commands write their JSON to the given
//! sink and return the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vasculo_core::{Error, ModelParams};

mod commands;
pub mod sweep;

pub use commands::{classify_json, ClassifyOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NOT_FOUND: i32 = 3;
pub const EXIT_REGIME: i32 = 4;
pub const EXIT_VERIFY: i32 = 5;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "vasculo",
    version,
    about = "Stationary bump solutions of a radial chemotaxis model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Classify a parameter set by the sign of a chi/(D eps) - b/D
    Classify(CommonArgs),
    /// Build the bump centred at the origin
    Halfbump(HalfbumpArgs),
    /// Build a bump on an annulus by Newton iteration from a guess
    Interiorbump(InteriorArgs),
    /// Check a solution file against both equations and the integral identities
    Verify(VerifyArgs),
    /// Certify that a configuration admits no bump
    Probe(ProbeArgs),
    /// Run constructions over a grid of (a, b)
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// JSON file with D, chi, a, b, eps
    #[arg(long)]
    pub params: PathBuf,
    /// write the JSON result here instead of standard output
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    /// CSV profile output
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 10.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct TolArgs {
    /// quadrature absolute tolerance
    #[arg(long = "tol-abs", default_value_t = 1e-12)]
    pub tol_abs: f64,
    /// quadrature relative tolerance
    #[arg(long = "tol-rel", default_value_t = 1e-10)]
    pub tol_rel: f64,
    /// quadrature bisection depth
    #[arg(long = "tol-depth", default_value_t = 40)]
    pub tol_depth: u32,
}

#[derive(Args, Debug, Clone)]
pub struct HalfbumpArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 1.0)]
    pub phi0: f64,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug, Clone)]
pub struct InteriorArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// initial (r0, r1)
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 3.0])]
    pub guess: Vec<f64>,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// solution file (a bare solution or an object with a `solution` key)
    pub solution: PathBuf,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// truncation radius (default: last breakpoint + 40/beta)
    #[arg(long)]
    pub rmax: Option<f64>,
    /// residual grid points
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    /// adds 64 random residual points drawn from this seed
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioName {
    HalfBumpCase1,
    HalfBumpCase2,
    TouchingZeroCase1,
    TouchingZeroCase2,
    TouchingZeroCase3,
    SymmetricInterior,
}

#[derive(Args, Debug, Clone)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub scenario: ScenarioName,
    #[arg(long, default_value_t = 1.0)]
    pub rho0: f64,
    #[arg(long, default_value_t = 2.0)]
    pub phi0: f64,
    /// constant K for the touching-zero scenarios
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 50.0)]
    pub rmax: f64,
    #[arg(long, default_value_t = 2001)]
    pub n: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Halfbump,
    Interiorbump,
    Both,
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// base parameters; a and b are overridden per cell
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = [1.5, 2.0, 3.0])]
    pub a: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0])]
    pub b: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SweepKind::Both)]
    pub kind: SweepKind,
    #[arg(long, default_value_t = 1.0)]
    pub phi0: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 3.0])]
    pub guess: Vec<f64>,
    /// worker threads
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// directory for per-cell solution files
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// summary table as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Error carrying the exit code and an optional JSON body for the caller.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
    pub body: Option<serde_json::Value>,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            body: None,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation { .. }
        | Error::Usage(_)
        | Error::Json(_)
        | Error::Domain { .. }
        | Error::Overflow { .. } => EXIT_VALIDATION,
        Error::NotFound { .. } | Error::NoZero { .. } | Error::SpuriousRoot(_) => EXIT_NOT_FOUND,
        Error::Regime(_) => EXIT_REGIME,
        Error::Accuracy { .. } => EXIT_VERIFY,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let body = match &e {
            Error::NotFound { reason, trace } => Some(serde_json::json!({
                "error": "not_found",
                "reason": reason,
                "trace": trace,
            })),
            _ => None,
        };
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
            body,
        }
    }
}

pub(crate) fn read_params(path: &Path) -> Result<ModelParams, Failure> {
    let text = fs::read_to_string(path).map_err(|e| {
        Failure::new(
            EXIT_VALIDATION,
            format!("cannot read {}: {e}", path.display()),
        )
    })?;
    Ok(ModelParams::from_json(&text)?)
}

pub(crate) fn emit<T: Serialize>(
    value: &T,
    json: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    match json {
        Some(path) => fs::write(path, text + "\n").map_err(|e| {
            Failure::new(
                EXIT_VALIDATION,
                format!("cannot write {}: {e}", path.display()),
            )
        }),
        None => writeln!(out, "{text}").map_err(|e| Failure::new(EXIT_VALIDATION, e.to_string())),
    }
}

/// Runs one command; diagnostics go to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Classify(a) => commands::classify(a, out),
        Command::Halfbump(a) => commands::halfbump(a, out),
        Command::Interiorbump(a) => commands::interiorbump(a, out),
        Command::Verify(a) => commands::verify(a, out),
        Command::Probe(a) => commands::probe(a, out),
        Command::Sweep(a) => sweep::run(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            if let Some(body) = &f.body {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(body).unwrap_or_default()
                );
            }
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
