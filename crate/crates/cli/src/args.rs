//! Command-line definition and flag validation.
//!
//! Clap handles syntax; the `validate` helpers enforce the numeric bounds
//! before any work starts, naming the offending flag.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "abc-ttb", version, about = "Grow lexicographic decision trees from cue building blocks and run the accompanying experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate synthetic paired-comparison data from the ground-truth tree
    Gen(GenArgs),
    /// Fit the learner to a dataset and store the posterior state
    Fit(FitArgs),
    /// Predict pairs with a previously fitted state
    Predict(PredictArgs),
    /// Recovery experiment: importance-share traces on synthetic data
    Recover(RecoverArgs),
    /// Train/test comparison of ABC-TTB, TTB and CART on an object table
    Compare(CompareArgs),
    /// Effort/accuracy sweep over the tolerance-by-subsample grid
    Tradeoff(TradeoffArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of pairs to generate
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Total number of cues
    #[arg(long, default_value_t = 4)]
    pub cues: usize,
    /// Number of outcome-determining cues
    #[arg(long, default_value_t = 3)]
    pub informative: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory
    #[arg(long, default_value = "./results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Object table or pair file (CSV)
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub phi: f64,
    #[arg(long, default_value_t = 100)]
    pub eta: u64,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_proposals: u64,
    #[arg(long)]
    pub count_all_decisions: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "./results")]
    pub out: PathBuf,
    /// Emit an SVG chart of the share trace
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// Fitted state (state.json written by `fit`)
    #[arg(long)]
    pub state: PathBuf,
    /// Object table or pair file (CSV)
    #[arg(long)]
    pub data: PathBuf,
    /// Trees sampled per prediction
    #[arg(long, default_value_t = 101)]
    pub omega: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "./results")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// Synthetic training pairs per replicate
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub phi: f64,
    #[arg(long, default_value_t = 100)]
    pub eta: u64,
    #[arg(long, default_value_t = 100)]
    pub replicates: u32,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_proposals: u64,
    #[arg(long)]
    pub count_all_decisions: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "./results")]
    pub out: PathBuf,
    /// Emit an SVG chart of the mean share traces
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Object table (CSV, `name,criterion,<cue>...`)
    #[arg(long)]
    pub data: PathBuf,
    /// Training fractions, comma separated
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    pub fractions: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub replicates: u32,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub phi: f64,
    #[arg(long, default_value_t = 100)]
    pub eta: u64,
    #[arg(long, default_value_t = 101)]
    pub omega: u32,
    #[arg(long, default_value_t = 10_000_000)]
    pub max_proposals: u64,
    #[arg(long)]
    pub count_all_decisions: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "./results")]
    pub out: PathBuf,
    /// Emit an SVG chart of accuracy by training fraction
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Args)]
pub struct TradeoffArgs {
    /// Tolerance grid, comma separated
    #[arg(long = "grid-eps", value_delimiter = ',', default_value = "0.1,0.5,0.9")]
    pub grid_eps: Vec<f64>,
    /// Subsample-fraction grid, comma separated
    #[arg(long = "grid-phi", value_delimiter = ',', default_value = "0.1,0.5,0.9")]
    pub grid_phi: Vec<f64>,
    #[arg(long, default_value_t = 20)]
    pub replicates: u32,
    /// Synthetic pairs per replicate
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub eta: u64,
    #[arg(long, default_value_t = 101)]
    pub omega: u32,
    /// Per-cell proposal cap; stalled cells are censored at this value
    #[arg(long, default_value_t = 10_000_000)]
    pub max_proposals: u64,
    #[arg(long)]
    pub count_all_decisions: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "./results")]
    pub out: PathBuf,
    /// Emit SVG charts of effort, accuracy, and their ratio
    #[arg(long)]
    pub svg: bool,
}

pub fn check_epsilon(name: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && (0.0..1.0).contains(&value) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must satisfy 0 <= epsilon < 1 (got {value})")))
    }
}

pub fn check_phi(name: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && value > 0.0 && value <= 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must satisfy 0 < phi <= 1 (got {value})")))
    }
}

pub fn check_fractions(name: &str, values: &[f64]) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Usage(format!("{name} must list at least one value")));
    }
    for &value in values {
        if !(value.is_finite() && value > 0.0 && value < 1.0) {
            return Err(CliError::Usage(format!(
                "{name} entries must lie strictly between 0 and 1 (got {value})"
            )));
        }
    }
    Ok(())
}

pub fn check_at_least_one(name: &str, value: u64) -> Result<(), CliError> {
    if value >= 1 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be at least 1")))
    }
}

pub fn check_max_proposals(max_proposals: u64, eta: u64) -> Result<(), CliError> {
    if max_proposals >= eta {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--max-proposals ({max_proposals}) must be at least --eta ({eta})"
        )))
    }
}
