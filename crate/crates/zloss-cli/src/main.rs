//! `zloss` — sweeps, training demos, cutoff inference, and data cleaning for
//! batchwise z-score outlier masking.
//!
//! Exit codes: 0 success, 1 runtime/data error, 2 usage error.

mod commands;
mod csvfmt;
mod manifest;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Errors split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or malformed input files: exit 2.
    Usage(String),
    /// Failures on well-formed input (insufficient data, divergence, IO):
    /// exit 1.
    Runtime(String),
}

impl CliError {
    fn from_core(e: zloss_core::Error) -> Self {
        match e {
            // InvalidInput out of the core always traces back to flag values.
            zloss_core::Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<zloss_core::Error> for CliError {
    fn from(e: zloss_core::Error) -> Self {
        CliError::from_core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "zloss", version, about = "Z-error loss experiments: sweeps, training demos, cutoffs, and data cleaning")]
pub struct Cli {
    /// Base seed for all randomness.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Output file (CSV). Required by every subcommand except `cutoff`,
    /// where it is optional.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Suppress informational chatter on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Batch-size sensitivity sweep of outlier detection.
    Sweep(SweepArgs),
    /// Train a small model and emit per-epoch statistics.
    TrainDemo(TrainDemoArgs),
    /// Infer the decision cutoff from a logit/label file.
    Cutoff(CutoffArgs),
    /// Flag outliers in a data file (full-dataset masking).
    Clean(CleanArgs),
    /// Emit the annealed sigma threshold per epoch.
    AnnealTable(AnnealArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    Regression,
    Classification,
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Task::Regression => write!(f, "regression"),
            Task::Classification => write!(f, "classification"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LossFlag {
    Zmse,
    Mse,
    Zbce,
    Bce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MaskModeFlag {
    Target,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelFlag {
    Linear,
    Logistic,
    Mlp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutoffMethodFlag {
    Gaussian,
    Skewnorm,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub task: Task,

    /// Dataset size.
    #[arg(long, default_value_t = 2000)]
    pub n: usize,

    /// Feature dimension.
    #[arg(long, default_value_t = 3)]
    pub d: usize,

    /// Fraction of planted outliers.
    #[arg(long, default_value_t = 0.1)]
    pub outlier_frac: f64,

    /// Regression outlier offset, in noise standard deviations.
    #[arg(long, default_value_t = 6.0)]
    pub margin: f64,

    /// Regression noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub noise_std: f64,

    /// Classification cluster separation.
    #[arg(long, default_value_t = 6.0)]
    pub cluster_sep: f64,

    /// Detection z threshold.
    #[arg(long, default_value_t = 1.5)]
    pub sigma: f64,

    /// Batch sizes to sweep.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,96,128,256,512")]
    pub batch_sizes: Vec<usize>,

    /// Independent trials per batch size.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,

    /// Also render an F1-vs-batch-size chart beside the CSV.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, clap::Args)]
pub struct TrainDemoArgs {
    #[arg(long, value_enum)]
    pub task: Task,

    #[arg(long, value_enum)]
    pub loss: LossFlag,

    /// Regression masking statistic (targets or squared errors).
    #[arg(long, value_enum, default_value_t = MaskModeFlag::Target)]
    pub mask_mode: MaskModeFlag,

    #[arg(long, default_value_t = 100)]
    pub epochs: usize,

    #[arg(long, default_value_t = 64)]
    pub batch_size: usize,

    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,

    /// Annealing as START:END or START:END:HORIZON (epochs; defaults to
    /// epochs-1, holding END afterwards).
    #[arg(long, default_value = "100:2")]
    pub anneal: String,

    /// Fixed threshold, overriding --anneal.
    #[arg(long)]
    pub threshold: Option<f64>,

    #[arg(long, default_value_t = 2000)]
    pub n: usize,

    #[arg(long, default_value_t = 3)]
    pub d: usize,

    #[arg(long, default_value_t = 0.1)]
    pub outlier_frac: f64,

    #[arg(long, default_value_t = 6.0)]
    pub margin: f64,

    #[arg(long, default_value_t = 1.0)]
    pub noise_std: f64,

    #[arg(long, default_value_t = 6.0)]
    pub cluster_sep: f64,

    /// Model family; defaults to linear for regression, logistic for
    /// classification.
    #[arg(long, value_enum)]
    pub model: Option<ModelFlag>,

    /// Hidden width for --model mlp.
    #[arg(long, default_value_t = 16)]
    pub width: usize,
}

#[derive(Debug, clap::Args)]
pub struct CutoffArgs {
    /// CSV with header `logit,label`.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = CutoffMethodFlag::Gaussian)]
    pub method: CutoffMethodFlag,

    #[arg(long, default_value_t = 2.0)]
    pub z_threshold: f64,
}

#[derive(Debug, clap::Args)]
pub struct CleanArgs {
    /// CSV with header `id,target`, `id,prediction,target`, or
    /// `id,logit,label`; the header picks the masking mode.
    #[arg(long)]
    pub input: PathBuf,

    #[arg(long, default_value_t = 2.0)]
    pub sigma: f64,
}

#[derive(Debug, clap::Args)]
pub struct AnnealArgs {
    #[arg(long, default_value_t = 100)]
    pub epochs: usize,

    #[arg(long, default_value_t = 100.0)]
    pub start: f64,

    #[arg(long, default_value_t = 2.0)]
    pub end: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => commands::sweep::run(&cli, args),
        Command::TrainDemo(args) => commands::train_demo::run(&cli, args),
        Command::Cutoff(args) => commands::cutoff::run(&cli, args),
        Command::Clean(args) => commands::clean::run(&cli, args),
        Command::AnnealTable(args) => commands::anneal::run(&cli, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// The output path, required by most subcommands.
pub fn require_out(cli: &Cli) -> Result<&PathBuf, CliError> {
    cli.out
        .as_ref()
        .ok_or_else(|| CliError::Usage("--out <FILE> is required for this subcommand".into()))
}

pub fn info(cli: &Cli, msg: impl AsRef<str>) {
    if !cli.quiet {
        println!("{}", msg.as_ref());
    }
}
