//! `cmv`: samplers, flows, spectral transforms and verification suites.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exit statuses.
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "cmv", version, about = "CMV matrices, beta-ensembles and Ablowitz-Ladik flows")]
pub struct Cli {
    /// Suppress progress messages on standard error.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample eigenvalues from a beta-ensemble matrix model.
    Sample(SampleArgs),
    /// Evolve Verblunsky coefficients under an Ablowitz-Ladik Hamiltonian.
    Flow(FlowArgs),
    /// Convert between coefficients, CMV matrices and spectral measures.
    Spectral(SpectralArgs),
    /// Run a numerical verification suite.
    Verify(VerifyArgs),
    /// Bin samples from a CSV file.
    Histogram(HistogramArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FamilyArg {
    Circular,
    Jacobi,
    Hermite,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long)]
    pub count: usize,
    #[arg(long)]
    pub seed: u64,
    /// Eigenvalue CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional JSON file with the coefficients of every draw.
    #[arg(long)]
    pub coeffs_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PartArg {
    Re,
    Im,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Rk4,
    Spectral,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    /// Initial coefficients as JSON.
    #[arg(long, conflicts_with = "random", required_unless_present = "random")]
    pub init: Option<PathBuf>,
    /// Random initial coefficients of size `--n`, interior radius 0.9.
    #[arg(long, requires_all = ["seed", "n"])]
    pub random: bool,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, value_enum, default_value = "re")]
    pub part: PartArg,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: MethodArg,
    /// Keep every k-th step in the trajectory.
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectralArgs {
    /// Coefficients JSON; writes the spectral measure.
    #[arg(long, conflicts_with = "measure", required_unless_present = "measure")]
    pub coeffs: Option<PathBuf>,
    /// Circle measure JSON; writes the coefficients.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Also write the CMV matrix as JSON rows.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SuiteArg {
    Brackets,
    Jacobian,
    Cotangent,
    Canonical,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub bins: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub max: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failed command and the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl ToString) -> Self {
        Self { code: EXIT_USAGE, message: message.to_string() }
    }

    pub fn domain(message: impl ToString) -> Self {
        Self { code: EXIT_DOMAIN, message: message.to_string() }
    }

    pub fn io(err: impl std::fmt::Display) -> Self {
        Self { code: 1, message: err.to_string() }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("CMV_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::usage(format!("CMV_THREADS must be a positive integer, got '{raw}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(Failure::io)?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    let result = configure_threads().and_then(|()| commands::run(cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !quiet || f.code != EXIT_VERIFY {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
