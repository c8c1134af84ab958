//! The `ccf` command-line tool.
//!
//! Every command is deterministic given its flags and input files. Settings
//! come from built-in defaults, then `--config <file.json>`, then `--set
//! key=value` pairs, then dedicated flags.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data or format
//! error, 3 numerical failure during training.

mod commands;
mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{BankSection, ConfigBuilder, EpisodeSection, FlatConfig, RunConfig};

use crate::error::{Error, Result};
use crate::featurestore::{BankFormat, Split};
use crate::fewshot::ClassifierKind;

#[derive(Debug, Parser)]
#[command(
    name = "ccf",
    version,
    about = "Category-correlated feature correction for few-shot classification"
)]
pub struct Cli {
    /// Worker threads for episode evaluation and sweeps (default: all cores).
    /// Results do not depend on this value.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic feature bank with base, validation and novel classes.
    GenSynthetic(GenSyntheticArgs),
    /// Train a corrector on the base split and write a checkpoint plus log.
    Train(TrainArgs),
    /// Evaluate few-shot accuracy on the novel split.
    Eval(EvalArgs),
    /// Train one model per (temperature, seed) and tabulate the trade-off.
    Sweep(SweepArgs),
    /// Measure how rectification moves features relative to class centres.
    Analyze(AnalyzeArgs),
    /// Convert a bank between the binary and CSV formats.
    Convert(ConvertArgs),
}

/// Settings shared by commands that read a run configuration.
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Flat JSON config file of dotted keys, e.g. {"train.temperature": 0.1}.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one config key, e.g. --set train.beta=0.1 (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct EpisodeArgs {
    /// Classes per episode [config: episode.way, default 5].
    #[arg(long)]
    pub way: Option<usize>,
    /// Support samples per class [config: episode.shot, default 1].
    #[arg(long)]
    pub shot: Option<usize>,
    /// Query samples per class [config: episode.query, default 15].
    #[arg(long)]
    pub query: Option<usize>,
    /// Evaluation episodes [config: episode.episodes, default 2000].
    #[arg(long)]
    pub episodes: Option<usize>,
    /// logistic_regression, cosine or nearest_centroid [config: classifier.kind].
    #[arg(long)]
    pub classifier: Option<ClassifierKind>,
}

#[derive(Debug, Clone, Args)]
pub struct GenSyntheticArgs {
    /// Number of base classes.
    #[arg(long, default_value_t = 64)]
    pub base: usize,
    /// Number of validation classes.
    #[arg(long, default_value_t = 16)]
    pub val: usize,
    /// Number of novel classes.
    #[arg(long, default_value_t = 20)]
    pub novel: usize,
    /// Feature dimension.
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    /// Samples per class.
    #[arg(long, default_value_t = 100)]
    pub per_class: usize,
    /// Mean of every centroid coordinate.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub centroid_offset: f64,
    /// Standard deviation of centroid coordinates.
    #[arg(long, default_value_t = 0.1)]
    pub centroid_scale: f64,
    /// Within-class noise standard deviation.
    #[arg(long, default_value_t = 0.12)]
    pub stddev: f64,
    /// Weight of the base-centroid mixture in validation and novel centroids.
    #[arg(long, default_value_t = 0.8)]
    pub correlation: f64,
    #[arg(long)]
    pub seed: u64,
    /// Output bank; `.csv` also writes `<stem>.splits.json`.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Output format (default: from the extension).
    #[arg(long)]
    pub format: Option<BankFormat>,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Feature bank [config: bank.path].
    #[arg(long)]
    pub bank: Option<PathBuf>,
    /// Seed for initialization, shuffling and validation episodes.
    #[arg(long)]
    pub seed: u64,
    /// Softmax temperature [config: train.temperature, default 0.1].
    #[arg(long)]
    pub temperature: Option<f64>,
    /// Latent norm weight [config: train.beta, default 0.05].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Adam learning rate [config: train.learning_rate, default 1e-4].
    #[arg(long)]
    pub learning_rate: Option<f64>,
    /// Epoch limit [config: train.max_epochs, default 100].
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Encoder hidden width [config: train.architecture.hidden_dim, default 2048].
    #[arg(long)]
    pub hidden: Option<usize>,
    #[command(flatten)]
    pub episode: EpisodeArgs,
    /// Checkpoint path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Training log path (default: checkpoint path with `.log.json`).
    #[arg(long)]
    pub log: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Trained checkpoint; its Box-Cox parameters are applied to the bank.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Feature bank [config: bank.path].
    #[arg(long)]
    pub bank: Option<PathBuf>,
    /// Seed for episode sampling.
    #[arg(long)]
    pub seed: u64,
    /// Skip rectified support features: the plain classifier baseline.
    #[arg(long)]
    pub baseline: bool,
    /// Split to sample episodes from.
    #[arg(long, default_value = "novel")]
    pub split: Split,
    #[command(flatten)]
    pub episode: EpisodeArgs,
    /// Report path (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Feature bank [config: bank.path].
    #[arg(long)]
    pub bank: Option<PathBuf>,
    /// Comma-separated temperatures.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub temps: Vec<f64>,
    /// Number of seeds per temperature, counting up from --seed.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    /// First training seed.
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub episode: EpisodeArgs,
    /// CSV output; a JSON report with the run config goes next to it.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub bank: PathBuf,
    /// Split to analyze: base, val or novel.
    #[arg(long, default_value = "novel")]
    pub split: Split,
    /// JSON report path (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Per-class distance table as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Latent codes of the split as CSV, one row per sample.
    #[arg(long)]
    pub export_latent: Option<PathBuf>,
    /// Rectified features of the split as CSV, one row per sample.
    #[arg(long)]
    pub export_rectified: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Input format (default: from the extension).
    #[arg(long)]
    pub from: Option<BankFormat>,
    /// Output format (default: from the extension).
    #[arg(long)]
    pub to: Option<BankFormat>,
    /// Split map of a CSV input (default: `<stem>.splits.json`).
    #[arg(long)]
    pub splits: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("ccf: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(|| commands::dispatch(cli.command)),
        None => commands::dispatch(cli.command),
    }
}
