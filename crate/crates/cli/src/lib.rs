//! Experiment runner behind the `powerball` binary.
//!
//! Exit codes: 0 success, 1 usage/config/data error, 2 numerical failure,
//! 3 ODE bound check failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod descriptor;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use commands::{cmd_gen_data, cmd_ode, cmd_run, cmd_sweep};
pub use descriptor::{parse_point, ObjectiveSpec, StepSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{0}")]
    BoundCheckFailed(String),

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

impl From<powerball::Error> for CliError {
    fn from(e: powerball::Error) -> Self {
        match e {
            powerball::Error::Numerical(_) | powerball::Error::NonFinite { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Output { .. } => 1,
            CliError::Numerical(_) => 2,
            CliError::BoundCheckFailed(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "powerball", version, about = "Powerball optimization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replicated runs of one method, one CSV per replicate plus a mean curve
    Run(RunArgs),
    /// Mean curves for several gamma values in one CSV
    Sweep(SweepArgs),
    /// Integrate the continuous flows and check their arrival bounds
    Ode(OdeArgs),
    /// Write a synthetic LIBSVM dataset
    GenData(GenDataArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// logistic:<path>, quadratic:<n>:<m>:<L> or synthetic:<n>:<d>:<nnz>
    #[arg(long, value_parser = parse_objective)]
    pub objective: ObjectiveSpec,

    /// Regularization weight of the logistic objectives
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,

    /// Seed of the synthetic dataset
    #[arg(long, default_value_t = 0)]
    pub data_seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OptimArgs {
    /// gd-powerball, one-bit, newton-powerball or lbfgs-powerball
    #[arg(long, default_value = "gd-powerball", value_parser = parse_method)]
    pub method: powerball::Method,

    /// fixed:<a>, theorem1:<L>, theorem1:auto or backtracking[:<a0>,<shrink>,<c>].
    /// Defaults to fixed:1 for newton-powerball and backtracking otherwise.
    #[arg(long, value_parser = parse_step)]
    pub step: Option<StepSpec>,

    #[arg(long, default_value_t = 100)]
    pub max_iters: usize,

    #[arg(long, default_value_t = 1e-8)]
    pub grad_tol: f64,

    /// L-BFGS history length
    #[arg(long, default_value_t = 5)]
    pub memory: usize,

    #[arg(long, default_value_t = 10)]
    pub replicates: usize,

    /// Replicate r starts from seed + r
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[command(flatten)]
    pub optim: OptimArgs,

    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,

    /// Output directory for replicate_NNN.csv and summary.csv
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[command(flatten)]
    pub optim: OptimArgs,

    /// Comma-separated gamma values
    #[arg(long, value_delimiter = ',', default_values_t = powerball::experiment::DEFAULT_GAMMAS)]
    pub gammas: Vec<f64>,

    /// Output CSV file
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct OdeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,

    /// Arrival tolerance on the gradient norm
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    /// End time; defaults to twice the arrival bound, or 10 without one
    #[arg(long)]
    pub t_end: Option<f64>,

    /// Initial point, comma-separated; a single value fills every coordinate
    #[arg(long, default_value = "1")]
    pub x0: String,

    /// Output directory for gradient_flow.csv and newton_flow.csv
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct GenDataArgs {
    #[arg(long)]
    pub examples: usize,

    #[arg(long)]
    pub features: usize,

    /// Nonzeros per example
    #[arg(long)]
    pub nnz: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub out: PathBuf,
}

fn parse_objective(s: &str) -> Result<ObjectiveSpec, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_step(s: &str) -> Result<StepSpec, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_method(s: &str) -> Result<powerball::Method, String> {
    s.parse().map_err(|e: powerball::Error| e.to_string())
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Ode(a) => cmd_ode(&a),
        Command::GenData(a) => cmd_gen_data(&a),
    }
}

/// Parses the process arguments, runs the command and maps the outcome to
/// an exit code.
pub fn main_entry() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
