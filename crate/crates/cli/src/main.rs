//! `pqsp`: batch front end for factorization, phase finding, simulation,
//! estimation, cost prediction, and validation.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pqsp_core::ErrorKind;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pqsp", version, about = "Parallel quantum signal processing toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor a non-negative polynomial into k low-degree factors.
    Factor(FactorArgs),
    /// Fit QSP phases to a real definite-parity target.
    Phases(PhasesArgs),
    /// Run a factorization plan on a state and report the parallel estimate.
    Simulate(SimulateArgs),
    /// Estimate a trace property of a state.
    Estimate(Box<EstimateArgs>),
    /// Predict shot counts without simulating.
    Cost(CostArgs),
    /// Run the invariant suites.
    Validate(ValidateArgs),
}

#[derive(Args)]
pub struct FactorArgs {
    /// Polynomial JSON file.
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value = "round-robin")]
    pub strategy: String,
    /// Allow k above half the degree by padding with constant factors.
    #[arg(long)]
    pub padded: bool,
    /// Plan JSON destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PhasesArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value = "wx_00")]
    pub convention: String,
    #[arg(long, default_value_t = 8)]
    pub starts: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// State generator or JSON file.
    #[arg(long)]
    pub state: String,
    /// Plan JSON, as written by `factor`.
    #[arg(long)]
    pub plan: PathBuf,
    /// Sampled shots; exact when absent.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, env = "PQSP_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Sim::Direct)]
    pub sim: Sim,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum PropertyArg {
    Trace,
    Renyi,
    VonNeumann,
    Partition,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Sim {
    Direct,
    Circuit,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BaseArg {
    E,
    Two,
}

#[derive(Args)]
pub struct EstimateArgs {
    /// Replay an experiment config or run record; other inputs are ignored
    /// apart from --out and --csv.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, required_unless_present = "config")]
    pub property: Option<PropertyArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub epsilon: f64,
    #[arg(long, conflicts_with = "auto_shots")]
    pub shots: Option<u64>,
    #[arg(long)]
    pub auto_shots: bool,
    /// Defaults to sampled when a shot policy is given, exact otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, env = "PQSP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// State generator (pure, maximally_mixed(D), diag(p,...), random_seeded(D,r,seed)) or JSON file.
    #[arg(long, default_value = "maximally_mixed(2)")]
    pub state: String,
    /// Polynomial JSON for --property trace.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = config::TraceMethod::Chebyshev)]
    pub method: config::TraceMethod,
    #[arg(long)]
    pub strategy: Option<String>,
    #[arg(long, value_enum, default_value_t = Sim::Direct)]
    pub sim: Sim,
    /// Lower end of the entropy approximation interval.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Rank bound used in place of the smallest eigenvalue.
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, value_enum, default_value_t = BaseArg::E)]
    pub log_base: BaseArg,
    /// Run record JSON destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat CSV export.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct CostArgs {
    /// factored, direct, chebyshev, renyi-integer, monomial, partition,
    /// renyi-noninteger, or von-neumann.
    #[arg(long)]
    pub route: String,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long = "k-constant")]
    pub k_constant: Option<f64>,
    #[arg(long)]
    pub norm_low: Option<f64>,
    #[arg(long)]
    pub norm_high: Option<f64>,
    #[arg(long)]
    pub one_norm: Option<f64>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, alias = "k")]
    pub threads: Option<usize>,
    #[arg(long)]
    pub s_alpha: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Suites to run (repeat or comma-separate); all when absent.
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Dimensions, as a list `2,4,8` or an inclusive range `2..8`.
    #[arg(long)]
    pub dims: Option<String>,
    /// Thread counts, as a list or inclusive range.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long, env = "PQSP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Summary JSON destination; stdout when absent.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Perturb every measured error; a negative control for the harness.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

/// What went wrong, and which exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Core(pqsp_core::Error),
    Usage(String),
    Validation(usize),
}

impl From<pqsp_core::Error> for Failure {
    fn from(e: pqsp_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Core(e) => match e.kind() {
                ErrorKind::Input => 2,
                ErrorKind::Convergence => 3,
                ErrorKind::PostSelection => 4,
            },
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(pqsp_core::Error::TargetNorm(n)) => {
                write!(f, "target sup-norm {n:.6} is not below 1; rescale the target polynomial")
            }
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Validation(n) => write!(f, "{n} invariant check(s) failed"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Factor(a) => commands::factor(&a),
        Command::Phases(a) => commands::phases(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Estimate(a) => commands::estimate(&a),
        Command::Cost(a) => commands::cost(&a),
        Command::Validate(a) => commands::validate(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
