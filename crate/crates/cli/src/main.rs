mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ampsample::backends::Backend;

#[derive(Parser, Debug)]
#[command(
    name = "ampsample",
    version,
    about = "Sample measurement outcomes from amplitude oracles"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice; falls back to AMPSAMPLE_SEED.
    #[arg(long, global = true, env = "AMPSAMPLE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for shots and chains (output does not depend on it).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit a JSON document instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Lift qubit-count guards.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample output strings of a circuit.
    SampleCircuit(SampleCircuitArgs),
    /// Run Metropolis chains targeting a ground-state measurement law.
    SampleGround(SampleGroundArgs),
    /// Sample measurement records of a surface-code state under a schedule.
    SampleMbqc(SampleMbqcArgs),
    /// Allocate prefix errors for an approximate stabilizer-rank sampler.
    Budget(BudgetArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Dump the exact output distribution of a circuit.
    Distribution(DistributionArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Statevector,
    Pathsum,
    Stabdecomp,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Statevector => Backend::Statevector,
            BackendArg::Pathsum => Backend::PathSum,
            BackendArg::Stabdecomp => Backend::StabDecomp,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Gate-by-gate sampling from prefix amplitudes.
    Gate,
    /// Qubit-by-qubit sampling from marginals.
    Qubit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Default,
    Plain,
    Robust,
}

#[derive(Args, Debug)]
pub struct SampleCircuitArgs {
    pub circuit: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendArg::Statevector)]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value_t = Algorithm::Gate)]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    /// Sampler shortcuts and query mode for the gate algorithm.
    #[arg(long, value_enum, default_value_t = Preset::Default)]
    pub options: Preset,
    /// Perturbation plan (`seed S` and `t epsilon` lines) wrapped around the backend.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    /// Report per-gate evaluation totals.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct SampleGroundArgs {
    /// Hamiltonian file (or magic-ratio file with --magic).
    pub hamiltonian: PathBuf,
    #[arg(long)]
    pub magic: bool,
    #[arg(long, default_value_t = 10_000)]
    pub chains: usize,
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    /// Proposal radius; defaults to the locality of H.
    #[arg(long)]
    pub k: Option<usize>,
    /// Starting string; defaults to a most likely string when n is small.
    #[arg(long)]
    pub x_in: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
}

#[derive(Args, Debug)]
pub struct SampleMbqcArgs {
    pub graph: PathBuf,
    /// Per-edge schedule in the circuit format; defaults to the identity.
    #[arg(long)]
    pub schedule: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
}

#[derive(Args, Debug)]
pub struct BudgetArgs {
    /// Circuit whose gates define the ξ sequence.
    #[arg(required_unless_present = "xi")]
    pub circuit: Option<PathBuf>,
    /// Explicit comma-separated ξ values instead of a circuit.
    #[arg(long, value_delimiter = ',', conflicts_with = "circuit")]
    pub xi: Option<Vec<f64>>,
    /// Target L1 error of the sampler.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Suites to run (repeatable); all when omitted.
    #[arg(long)]
    pub suite: Vec<String>,
    /// Uniform per-gate perturbation for the robustness suite.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Smaller instance counts and sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Add this real offset to the Γ gadget weight `c` (negative control).
    #[arg(long, allow_hyphen_values = true)]
    pub perturb_gadget: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DistributionArgs {
    pub circuit: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
