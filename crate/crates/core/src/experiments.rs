//! The three experiment harnesses: recovery traces on synthetic data, the
//! three-model train/test comparison on an object table, and the
//! tolerance-by-subsample effort/accuracy grid.
//!
//! Every run is a deterministic function of its inputs and a master seed.
//! Each replicate (and each stochastic stage within it) draws from its own
//! seed stream derived via [`seed::derive`], so results never depend on
//! execution order.

use thiserror::Error;

use crate::baselines::{CartParams, CartTree, ClassicTtb};
use crate::data::{build_pairs, split_objects, DataError, ObjectTable};
use crate::learn::{fit, fit_capped, LearnError, LearnerConfig};
use crate::model::{score_subsample, ModelError};
use crate::predict::mean_correct_predictions;
use crate::seed;
use crate::synth::{generate, SynthConfig, SynthError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("replicate {replicate}: {source}")]
    Stall { replicate: u32, source: LearnError },
    #[error("{0}")]
    Learn(#[from] LearnError),
    #[error("{0}")]
    Synth(#[from] SynthError),
    #[error("{0}")]
    Data(#[from] DataError),
    #[error("{0}")]
    Model(#[from] ModelError),
}

/// One trace point: the importance share of one cue after one acceptance.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryRow {
    pub replicate: u32,
    /// 1-based acceptance index.
    pub acceptance: u32,
    pub cue: usize,
    pub share: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RecoveryResult {
    pub rows: Vec<RecoveryRow>,
    pub k: usize,
    pub replicates: u32,
    pub eta: u64,
    /// Final direction-posterior means per replicate (replicate-major).
    pub final_direction_means: Vec<Vec<f64>>,
}

impl RecoveryResult {
    /// Mean share per cue at each acceptance index, averaged over replicates.
    pub fn mean_share_trace(&self) -> Vec<Vec<f64>> {
        let eta = self.eta as usize;
        let mut sums = vec![vec![0.0; eta]; self.k];
        let mut counts = vec![vec![0u32; eta]; self.k];
        for row in &self.rows {
            let a = row.acceptance as usize - 1;
            sums[row.cue][a] += row.share;
            counts[row.cue][a] += 1;
        }
        sums.iter()
            .zip(&counts)
            .map(|(s, c)| s.iter().zip(c).map(|(&x, &n)| x / n.max(1) as f64).collect())
            .collect()
    }

    /// Mean final share per cue across replicates.
    pub fn mean_final_shares(&self) -> Vec<f64> {
        self.mean_share_trace().iter().map(|trace| *trace.last().unwrap_or(&0.0)).collect()
    }

    /// Per-replicate final share vectors.
    pub fn final_shares_by_replicate(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.k]; self.replicates as usize];
        for row in &self.rows {
            if row.acceptance == self.eta as u32 {
                out[row.replicate as usize][row.cue] = row.share;
            }
        }
        out
    }
}

/// Fits the learner on freshly generated synthetic data (ground-truth
/// defaults) once per replicate and records the full share trace.
pub fn run_recovery(
    n: usize,
    learner: &LearnerConfig,
    replicates: u32,
    master_seed: u64,
) -> Result<RecoveryResult, ExperimentError> {
    let synth_base = SynthConfig { n, ..SynthConfig::default() };
    let mut result = RecoveryResult {
        rows: Vec::new(),
        k: synth_base.k_cues,
        replicates,
        eta: learner.eta,
        final_direction_means: Vec::new(),
    };
    for replicate in 0..replicates {
        let data_seed = seed::derive(master_seed, 2 * replicate as u64);
        let fit_seed = seed::derive(master_seed, 2 * replicate as u64 + 1);
        let pairs = generate(&synth_base, &mut seed::rng(data_seed))?;
        let state = fit(learner, &pairs, &mut seed::rng(fit_seed)).map_err(|e| match e {
            LearnError::AcceptanceStall { .. } => ExperimentError::Stall { replicate, source: e },
            other => ExperimentError::Learn(other),
        })?;
        for (acceptance, shares) in state.share_trace.iter().enumerate() {
            for (cue, &share) in shares.iter().enumerate() {
                result.rows.push(RecoveryRow {
                    replicate,
                    acceptance: acceptance as u32 + 1,
                    cue,
                    share,
                });
            }
        }
        result.final_direction_means.push(state.direction_means());
    }
    Ok(result)
}

/// The three models of the train/test comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    AbcTtb,
    Ttb,
    Cart,
}

impl ModelKind {
    pub fn label(self) -> &'static str {
        match self {
            ModelKind::AbcTtb => "ABC-TTB",
            ModelKind::Ttb => "TTB",
            ModelKind::Cart => "CART",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub fraction: f64,
    pub replicate: u32,
    pub model: ModelKind,
    pub test_accuracy: f64,
}

/// A split that could not be evaluated and was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitWarning {
    pub fraction: f64,
    pub replicate: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonResult {
    pub rows: Vec<ComparisonRow>,
    pub skipped: Vec<SplitWarning>,
}

impl ComparisonResult {
    /// Mean test accuracy of one model at one fraction.
    pub fn mean_accuracy(&self, model: ModelKind, fraction: f64) -> Option<f64> {
        let values: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.model == model && r.fraction == fraction)
            .map(|r| r.test_accuracy)
            .collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    }

    /// Mean test accuracy of one model over all rows.
    pub fn overall_mean(&self, model: ModelKind) -> Option<f64> {
        let values: Vec<f64> =
            self.rows.iter().filter(|r| r.model == model).map(|r| r.test_accuracy).collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    }
}

/// Splits the objects, fits all three models on the train pairs, and scores
/// them on the test pairs. The ensemble is scored by its modal predictions;
/// the deterministic models score guesses as 0.5. Degenerate splits are
/// skipped and recorded.
pub fn run_comparison(
    table: &ObjectTable,
    fractions: &[f64],
    replicates: u32,
    learner: &LearnerConfig,
    omega: u32,
    cart: &CartParams,
    master_seed: u64,
) -> Result<ComparisonResult, ExperimentError> {
    let mut result = ComparisonResult::default();
    for (fraction_index, &fraction) in fractions.iter().enumerate() {
        for replicate in 0..replicates {
            let cell = (fraction_index as u64 * replicates as u64 + replicate as u64) * 3;
            let split_seed = seed::derive(master_seed, cell);
            let fit_seed = seed::derive(master_seed, cell + 1);
            let eval_seed = seed::derive(master_seed, cell + 2);

            let (train, test) = match split_objects(table, fraction, &mut seed::rng(split_seed)) {
                Ok(split) => split,
                Err(e @ DataError::DegenerateSplit { .. }) => {
                    result.skipped.push(SplitWarning { fraction, replicate, reason: e.to_string() });
                    continue;
                }
                Err(other) => return Err(other.into()),
            };
            let train_pairs = build_pairs(&train)?.pairs;
            let test_pairs = build_pairs(&test)?.pairs;
            if train_pairs.is_empty() || test_pairs.is_empty() {
                result.skipped.push(SplitWarning {
                    fraction,
                    replicate,
                    reason: "all pairs on one side were criterion ties".into(),
                });
                continue;
            }

            let state = fit(learner, &train_pairs, &mut seed::rng(fit_seed)).map_err(|e| match e {
                LearnError::AcceptanceStall { .. } => ExperimentError::Stall { replicate, source: e },
                other => ExperimentError::Learn(other),
            })?;
            let abc = mean_correct_predictions(&state, &test_pairs, omega, &mut seed::rng(eval_seed))?;

            let ttb = ClassicTtb::fit(&train_pairs)?;
            let ttb_accuracy = score_subsample(&ttb.to_lex_tree(), &test_pairs)?.score;

            let cart_tree = CartTree::fit(&train_pairs, cart)?;
            let cart_hits = test_pairs
                .iter()
                .map(|p| cart_tree.predict(p).map(|c| usize::from(c == p.outcome())))
                .sum::<Result<usize, _>>()?;
            let cart_accuracy = cart_hits as f64 / test_pairs.len() as f64;

            for (model, accuracy) in [
                (ModelKind::AbcTtb, abc),
                (ModelKind::Ttb, ttb_accuracy),
                (ModelKind::Cart, cart_accuracy),
            ] {
                result.rows.push(ComparisonRow { fraction, replicate, model, test_accuracy: accuracy });
            }
        }
    }
    Ok(result)
}

/// One effort/accuracy grid cell outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffRow {
    pub epsilon: f64,
    pub phi: f64,
    pub replicate: u32,
    /// Total proposals, including rejected ones.
    pub n_proposals: u64,
    /// Mean correct predictions on the full generated sample.
    pub mcp: f64,
    pub mcp_per_proposal: f64,
    /// Set when the proposal budget ran out before `eta` acceptances.
    pub censored: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TradeoffResult {
    pub rows: Vec<TradeoffRow>,
}

impl TradeoffResult {
    /// Median `n_proposals` of the uncensored replicates in one cell.
    pub fn median_proposals(&self, epsilon: f64, phi: f64) -> Option<f64> {
        let mut values: Vec<u64> = self
            .rows
            .iter()
            .filter(|r| r.epsilon == epsilon && r.phi == phi && !r.censored)
            .map(|r| r.n_proposals)
            .collect();
        if values.is_empty() {
            return None;
        }
        values.sort_unstable();
        let mid = values.len() / 2;
        Some(if values.len() % 2 == 1 {
            values[mid] as f64
        } else {
            (values[mid - 1] + values[mid]) as f64 / 2.0
        })
    }

    /// Mean `mcp_per_proposal` of the uncensored replicates in one cell.
    pub fn mean_ratio(&self, epsilon: f64, phi: f64) -> Option<f64> {
        let values: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.epsilon == epsilon && r.phi == phi && !r.censored)
            .map(|r| r.mcp_per_proposal)
            .collect();
        if values.is_empty() {
            None
        } else {
            Some(values.iter().sum::<f64>() / values.len() as f64)
        }
    }
}

/// Sweeps the tolerance-by-subsample grid on synthetic ground-truth data.
/// Records total proposals as the effort proxy and the in-sample MCP of the
/// fitted ensemble on the full generated sample. Stalled cells are censored
/// at the proposal cap, not retried.
#[allow(clippy::too_many_arguments)]
pub fn run_tradeoff(
    epsilons: &[f64],
    phis: &[f64],
    base: &LearnerConfig,
    replicates: u32,
    n: usize,
    omega: u32,
    master_seed: u64,
) -> Result<TradeoffResult, ExperimentError> {
    let mut result = TradeoffResult::default();
    let synth_base = SynthConfig { n, ..SynthConfig::default() };
    for (ei, &epsilon) in epsilons.iter().enumerate() {
        for (pi, &phi) in phis.iter().enumerate() {
            for replicate in 0..replicates {
                let cell = ((ei as u64 * phis.len() as u64 + pi as u64) * replicates as u64
                    + replicate as u64)
                    * 3;
                let data_seed = seed::derive(master_seed, cell);
                let fit_seed = seed::derive(master_seed, cell + 1);
                let eval_seed = seed::derive(master_seed, cell + 2);

                let pairs = generate(&synth_base, &mut seed::rng(data_seed))?;
                let config = LearnerConfig { epsilon, phi, ..base.clone() };
                let outcome = fit_capped(&config, &pairs, &mut seed::rng(fit_seed))?;
                let mcp = mean_correct_predictions(
                    &outcome.state,
                    &pairs,
                    omega,
                    &mut seed::rng(eval_seed),
                )?;
                let n_proposals = outcome.state.proposed;
                result.rows.push(TradeoffRow {
                    epsilon,
                    phi,
                    replicate,
                    n_proposals,
                    mcp,
                    mcp_per_proposal: mcp / n_proposals as f64,
                    censored: outcome.stalled,
                });
            }
        }
    }
    Ok(result)
}
