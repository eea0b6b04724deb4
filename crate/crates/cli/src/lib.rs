//! Command-line front end: table reproduction, dataset evaluation with
//! leaderboards, overlap and metric-axiom scans, and simulation runs.
//!
//! Exit codes: 0 success (or all levels separated), 1 overlap detected,
//! 2 input or usage error. Diagnostics go to standard error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use scorecast::model::{MetricConfig, PenaltyScheme, Transform};

pub mod commands;
pub mod dataset;
pub mod format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OVERLAP: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("row {row}: malformed CSV: {message}")]
    Csv { row: usize, message: String },
    #[error("row {row}, column {column}: invalid value `{value}`: {reason}")]
    Parse { row: usize, column: &'static str, value: String, reason: String },
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("empty dataset")]
    EmptyDataset,
    #[error("row {row}: duplicate record for match `{match_id}`, forecaster `{forecaster_id}`")]
    DuplicateKey { row: usize, match_id: String, forecaster_id: String },
    #[error("invalid forecaster: {0}")]
    Forecaster(String),
    #[error(transparent)]
    Metric(#[from] scorecast::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "scorecast", version, about = "Penalty criterion for exact soccer score forecasts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Penalty values for the reference score pairs (Anscombe, c0 = 1, symmetric)
    Table1(OutputArgs),
    /// Score a forecast dataset and rank forecasters by mean penalty
    Evaluate(EvaluateArgs),
    /// Check whether penalty ranges of category-mismatch levels overlap
    Overlap(OverlapArgs),
    /// Scan symmetry, identity and triangle inequality of the distance term
    Axioms(AxiomArgs),
    /// Compare forecasters on simulated independent-Poisson matches
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Identity,
    Anscombe,
    FreemanTukey,
}

impl From<TransformArg> for Transform {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Identity => Transform::Identity,
            TransformArg::Anscombe => Transform::Anscombe,
            TransformArg::FreemanTukey => Transform::FreemanTukey,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Symmetric,
    Asymmetric,
}

impl From<SchemeArg> for PenaltyScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Symmetric => PenaltyScheme::Symmetric,
            SchemeArg::Asymmetric => PenaltyScheme::Asymmetric,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Decimals shown for real values (round half up)
    #[arg(long, default_value_t = 3)]
    pub precision: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    /// Unit category penalty
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c0: f64,
    #[arg(long, value_enum, default_value_t = TransformArg::Anscombe)]
    pub transform: TransformArg,
    /// Minkowski norm order r >= 1
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub norm_order: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Symmetric)]
    pub scheme: SchemeArg,
}

impl MetricArgs {
    pub fn config(&self) -> Result<MetricConfig<f64>, scorecast::Error> {
        MetricConfig::new(self.c0, self.norm_order, self.transform.into(), self.scheme.into())
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// CSV with columns match_id,forecaster_id,ga1,ga2,gf1,gf2
    pub input: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Also write the leaderboard as CSV to this path
    #[arg(long)]
    pub leaderboard: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long, default_value_t = scorecast::analysis::DEFAULT_OVERLAP_GRID)]
    pub grid_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AxiomArgs {
    #[arg(long, value_enum, default_value_t = TransformArg::Anscombe)]
    pub transform: TransformArg,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub norm_order: f64,
    #[arg(long, default_value_t = scorecast::analysis::DEFAULT_AXIOM_GRID)]
    pub grid_max: u32,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Number of simulated matches
    #[arg(long = "n", default_value_t = 64)]
    pub n_matches: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.5, allow_negative_numbers = true)]
    pub lambda1: f64,
    #[arg(long, default_value_t = 1.1, allow_negative_numbers = true)]
    pub lambda2: f64,
    /// constant:<g1>-<g2>, poisson[:<bias1>,<bias2>] or rounded-mean; repeatable
    #[arg(long = "forecaster", allow_hyphen_values = true)]
    pub forecasters: Vec<String>,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Runs a parsed command, writing results to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Table1(args) => commands::table1(&args, out).map(|_| EXIT_OK),
        Command::Evaluate(args) => commands::evaluate(&args, out).map(|_| EXIT_OK),
        Command::Overlap(args) => commands::overlap(&args, out),
        Command::Axioms(args) => commands::axioms(&args, out).map(|_| EXIT_OK),
        Command::Simulate(args) => commands::simulate(&args, out).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
