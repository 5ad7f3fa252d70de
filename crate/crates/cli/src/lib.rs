//! Command-line front end: `yamabe certify`, `yamabe integrals` and
//! `yamabe quotient`.
//!
//! Exit codes:
//!
//! | code | meaning                                                   |
//! |------|-----------------------------------------------------------|
//! | 0    | success                                                   |
//! | 1    | a check failed (verdict, residual, monotone improvement)   |
//! | 2    | precondition violated (e.g. `W(x₀) = 0`, `n` out of range) |
//! | 3    | a numerical tolerance was not met                         |
//! | 64   | usage error or malformed input                            |

mod commands;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use yamabe_core::Error;

pub use report::{Provenance, RunReport, Summary, Tagged, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Default seed when neither `--random` nor `YAMABE_SEED` is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "yamabe",
    version,
    about = "Exact and numerical checks of the perturbed-bubble energy expansion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certify that the ε⁴ energy coefficient is negative.
    Certify(CertifyArgs),
    /// Print the exact integral table, optionally checked by quadrature.
    Integrals(IntegralsArgs),
    /// Evaluate the quotient of the test function numerically.
    Quotient(QuotientArgs),
}

#[derive(Debug, Args)]
pub struct CurvatureSource {
    /// Curvature data as JSON.
    #[arg(long, conflicts_with = "random")]
    pub curv: Option<PathBuf>,
    /// Seed for random admissible curvature data.
    #[arg(long, env = "YAMABE_SEED")]
    pub random: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub source: CurvatureSource,
    /// Perturbation amplitude, as a rational such as `1` or `15/16`.
    #[arg(long = "A", default_value = "1")]
    pub a: String,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IntegralsArgs {
    #[arg(long)]
    pub n: u32,
    /// Compare every entry against numerical quadrature.
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuotientArgs {
    #[arg(long)]
    pub n: u32,
    #[command(flatten)]
    pub source: CurvatureSource,
    /// Sweep `ε ∈ δ/{8,16,32,64}` instead of the two smallest values.
    #[arg(long)]
    pub sweep: bool,
    /// Sample budget per energy evaluation.
    #[arg(long, default_value_t = 2_000_000)]
    pub samples: usize,
    /// Order of the metric jet (2, 3 or 4).
    #[arg(long, default_value_t = 4)]
    pub jet_order: u32,
    /// Write the sweep table as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PreconditionViolation(_) => EXIT_PRECONDITION,
        Error::ToleranceNotMet { .. } => EXIT_TOLERANCE,
        Error::InvalidInput(_) | Error::SymmetryViolation(_) | Error::UnsupportedOrder(_) => {
            EXIT_USAGE
        }
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing human output to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let started = std::time::Instant::now();
    let result = match &cli.command {
        Command::Certify(a) => commands::certify(a, out),
        Command::Integrals(a) => commands::integrals(a, out),
        Command::Quotient(a) => commands::quotient(a, out),
    };
    let code = match result {
        Ok(code) => code,
        Err(commands::Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
        Err(commands::Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    };
    let _ = writeln!(err, "wall time: {:.2?}", started.elapsed());
    code
}
