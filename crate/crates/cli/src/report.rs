//! Result serialization: fixed-header CSV files, the `run.json` record that
//! makes every run reproducible, and the series builders behind the charts.
//!
//! All numbers are written with Rust's default float formatting (shortest
//! round-trip, always a `.` decimal point), so outputs are locale-independent
//! and byte-stable for identical runs.

use std::collections::BTreeMap;
use std::fs;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use abc_ttb::experiments::{
    ComparisonResult, ModelKind, RecoveryResult, TradeoffResult,
};
use abc_ttb::learn::LearnerState;

use crate::chart::Series;
use crate::CliError;

/// Everything needed to reproduce a run: the subcommand and its fully
/// resolved flags, plus a human-oriented summary that plays no role in
/// reproduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    pub flags: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
}

/// Flags that take no value; `to_argv` re-emits them only when "true".
const BOOL_FLAGS: &[&str] = &["count-all-decisions", "svg"];

impl RunRecord {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), flags: BTreeMap::new(), summary: None }
    }

    pub fn flag(mut self, name: &str, value: impl ToString) -> Self {
        self.flags.insert(name.to_string(), value.to_string());
        self
    }

    pub fn flag_list(mut self, name: &str, values: &[f64]) -> Self {
        let joined = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.flags.insert(name.to_string(), joined);
        self
    }

    pub fn with_summary(mut self, summary: Value) -> Self {
        self.summary = Some(summary);
        self
    }

    /// Reconstructs the argv that reproduces this run.
    pub fn to_argv(&self) -> Vec<String> {
        let mut argv = vec![self.command.clone()];
        for (name, value) in &self.flags {
            if BOOL_FLAGS.contains(&name.as_str()) {
                if value == "true" {
                    argv.push(format!("--{name}"));
                }
            } else {
                argv.push(format!("--{name}"));
                argv.push(value.clone());
            }
        }
        argv
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join("run.json");
        let json = serde_json::to_string_pretty(self).expect("record serializes");
        fs::write(&path, json + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: not a run record: {e}", path.display())))
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

pub fn recovery_csv(result: &RecoveryResult) -> String {
    let mut out = String::from("replicate,acceptance,cue,share\n");
    for row in &result.rows {
        let _ = writeln!(out, "{},{},{},{}", row.replicate, row.acceptance, row.cue, row.share);
    }
    out
}

pub fn comparison_csv(result: &ComparisonResult) -> String {
    let mut out = String::from("fraction,replicate,model,accuracy\n");
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.fraction,
            row.replicate,
            row.model.label(),
            row.test_accuracy
        );
    }
    out
}

pub fn tradeoff_csv(result: &TradeoffResult) -> String {
    let mut out = String::from("epsilon,phi,replicate,n_proposals,mcp,mcp_per_proposal\n");
    for row in &result.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.epsilon, row.phi, row.replicate, row.n_proposals, row.mcp, row.mcp_per_proposal
        );
    }
    out
}

pub fn fit_trace_csv(state: &LearnerState) -> String {
    let mut out = String::from("acceptance,cue,share\n");
    for (acceptance, shares) in state.share_trace.iter().enumerate() {
        for (cue, share) in shares.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", acceptance + 1, cue, share);
        }
    }
    out
}

/// Posterior summary shared by `fit` and `run.json`: per-cue means and
/// shares, so the learned structure is inspectable without plotting.
pub fn posterior_summary(state: &LearnerState) -> Value {
    serde_json::json!({
        "importance_means": state.posteriors.iter().map(|p| p.importance.mean()).collect::<Vec<_>>(),
        "direction_means": state.direction_means(),
        "importance_shares": state.importance_shares(),
        "accepted": state.accepted,
        "proposed": state.proposed,
    })
}

/// Mean share trace per cue, one series per cue, ordered by final share
/// (largest first) so the legend reads off the learned importance order.
pub fn recovery_series(result: &RecoveryResult) -> Vec<Series> {
    let traces = result.mean_share_trace();
    let mut order: Vec<usize> = (0..result.k).collect();
    order.sort_by(|&a, &b| {
        let fa = traces[a].last().copied().unwrap_or(0.0);
        let fb = traces[b].last().copied().unwrap_or(0.0);
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    order
        .into_iter()
        .map(|cue| {
            let points = traces[cue]
                .iter()
                .enumerate()
                .map(|(i, &share)| (i as f64 + 1.0, share))
                .collect();
            Series::new(format!("c{}", cue + 1), points)
        })
        .collect()
}

/// Mean accuracy per training fraction, one series per model.
pub fn comparison_series(result: &ComparisonResult, fractions: &[f64]) -> Vec<Series> {
    [ModelKind::AbcTtb, ModelKind::Ttb, ModelKind::Cart]
        .into_iter()
        .map(|model| {
            let points = fractions
                .iter()
                .filter_map(|&f| result.mean_accuracy(model, f).map(|a| (f, a)))
                .collect();
            Series::new(model.label(), points)
        })
        .collect()
}

/// One series per phi over epsilon, for a per-cell statistic.
pub fn tradeoff_series(
    epsilons: &[f64],
    phis: &[f64],
    cell: impl Fn(f64, f64) -> Option<f64>,
) -> Vec<Series> {
    phis.iter()
        .map(|&phi| {
            let points = epsilons.iter().filter_map(|&eps| cell(eps, phi).map(|v| (eps, v))).collect();
            Series::new(format!("phi={phi}"), points)
        })
        .collect()
}
