//! The learner: subsample the training pairs, propose a tree, test it against
//! the tolerance, reinforce the posteriors on acceptance, repeat until enough
//! proposals have been accepted.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    importance_shares, score_pairs, CuePosterior, EvalReport, LexTree, ModelError,
    PairedComparison,
};
use crate::proposal::propose_tree;

/// Tuning knobs of one learning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    /// Tolerance: a proposal is accepted when `1 - score <= epsilon`.
    pub epsilon: f64,
    /// Fraction of the training pairs drawn (without replacement) per proposal.
    pub phi: f64,
    /// Required number of accepted proposals.
    pub eta: u64,
    /// Stall guard: error out if this many proposals fail to reach `eta`
    /// acceptances.
    pub max_proposals: u64,
    /// Count every first discrimination during scoring, not only correct ones.
    pub count_all_decisions: bool,
    /// Reinforce directions with `count / subsample size` instead of the raw
    /// count.
    pub normalize_increments: bool,
    /// Seed used by drivers that own no RNG of their own.
    pub seed: u64,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            phi: 0.1,
            eta: 100,
            max_proposals: 10_000_000,
            count_all_decisions: false,
            normalize_increments: false,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon must satisfy 0 <= epsilon < 1 (got {0})")]
    Epsilon(f64),
    #[error("phi must satisfy 0 < phi <= 1 (got {0})")]
    Phi(f64),
    #[error("eta must be at least 1")]
    Eta,
    #[error("max_proposals ({max_proposals}) must be at least eta ({eta})")]
    MaxProposals { max_proposals: u64, eta: u64 },
}

impl LearnerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon >= 0.0 && self.epsilon < 1.0) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if !(self.phi > 0.0 && self.phi <= 1.0) {
            return Err(ConfigError::Phi(self.phi));
        }
        if self.eta == 0 {
            return Err(ConfigError::Eta);
        }
        if self.max_proposals < self.eta {
            return Err(ConfigError::MaxProposals { max_proposals: self.max_proposals, eta: self.eta });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnError {
    #[error("no training pairs")]
    EmptyTraining,
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Model(#[from] ModelError),
    #[error(
        "acceptance stalled: {accepted} of {eta} acceptances after {proposed} proposals \
         (epsilon/phi too strict for this data)"
    )]
    AcceptanceStall { accepted: u64, proposed: u64, eta: u64 },
}

/// All cue posteriors plus the fit statistics of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerState {
    pub posteriors: Vec<CuePosterior>,
    pub accepted: u64,
    pub proposed: u64,
    /// Importance shares recorded after each acceptance.
    pub share_trace: Vec<Vec<f64>>,
    /// One entry per proposal: accepted or rejected.
    pub acceptance_trace: Vec<bool>,
}

impl LearnerState {
    pub fn new(k: usize) -> Self {
        Self {
            posteriors: vec![CuePosterior::flat(); k],
            accepted: 0,
            proposed: 0,
            share_trace: Vec::new(),
            acceptance_trace: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.posteriors.len()
    }

    pub fn importance_shares(&self) -> Vec<f64> {
        importance_shares(&self.posteriors)
    }

    pub fn direction_means(&self) -> Vec<f64> {
        self.posteriors.iter().map(|p| p.direction.mean()).collect()
    }

    /// Applies one accepted proposal. A cue that correctly discriminated
    /// first on `c > 0` of the `m` subsampled pairs contributes one rate
    /// observation to its importance Beta — `c/m` successes and `(m-c)/m`
    /// failures — so the posterior mean tracks the cue's per-pair success
    /// rate (the quantity the proposal sampler normalizes into top-node
    /// probabilities) and the update weight does not depend on the subsample
    /// size. Its direction Beta gains `c` successes or failures depending on
    /// the sampled direction (one ball per correct discrimination), or `c/m`
    /// under `normalize`. Cues with `c = 0` are untouched. Appends the
    /// updated importance shares to the trace and bumps the acceptance count.
    pub fn reinforce(&mut self, tree: &LexTree, report: &EvalReport, normalize: bool) {
        debug_assert_eq!(tree.k(), self.k());
        debug_assert_eq!(report.correct_decisions.len(), self.k());
        let m = report.n_pairs as f64;
        for (cue, &count) in report.correct_decisions.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let rate = count as f64 / m;
            self.posteriors[cue].importance.add_successes(rate);
            self.posteriors[cue].importance.add_failures(1.0 - rate);
            let direction_weight = if normalize { rate } else { count as f64 };
            match tree.directions()[cue].sign() {
                1 => self.posteriors[cue].direction.add_successes(direction_weight),
                _ => self.posteriors[cue].direction.add_failures(direction_weight),
            }
        }
        self.share_trace.push(self.importance_shares());
        self.accepted += 1;
    }
}

/// Acceptance test: distance `1 - score` within tolerance (inclusive).
pub fn accept_test(report: &EvalReport, epsilon: f64) -> bool {
    (1.0 - report.score) <= epsilon
}

/// A finished or capped run: `stalled` is set when the proposal budget ran
/// out before `eta` acceptances.
#[derive(Debug, Clone, PartialEq)]
pub struct FitOutcome {
    pub state: LearnerState,
    pub stalled: bool,
}

fn subsample_size(phi: f64, n: usize) -> usize {
    // The 1e-9 guards against float slop in phi * n (e.g. 0.1 * 1000
    // landing a hair above 100).
    let m = (phi * n as f64 - 1e-9).ceil() as usize;
    m.clamp(1, n)
}

/// Like [`fit`], but a stall yields the partial state instead of an error.
pub fn fit_capped<R: Rng + ?Sized>(
    config: &LearnerConfig,
    training_pairs: &[PairedComparison],
    rng: &mut R,
) -> Result<FitOutcome, LearnError> {
    config.validate()?;
    let Some(first) = training_pairs.first() else {
        return Err(LearnError::EmptyTraining);
    };
    let k = first.k();
    if let Some(bad) = training_pairs.iter().find(|p| p.k() != k) {
        return Err(LearnError::Model(ModelError::DimensionMismatch { expected: k, got: bad.k() }));
    }

    let m = subsample_size(config.phi, training_pairs.len());
    let mut state = LearnerState::new(k);
    while state.accepted < config.eta {
        if state.proposed >= config.max_proposals {
            return Ok(FitOutcome { state, stalled: true });
        }
        let subsample = rand::seq::index::sample(rng, training_pairs.len(), m);
        let tree = propose_tree(&state.posteriors, rng);
        let report = score_pairs(
            &tree,
            subsample.iter().map(|i| &training_pairs[i]),
            config.count_all_decisions,
        )?;
        state.proposed += 1;
        let accepted = accept_test(&report, config.epsilon);
        state.acceptance_trace.push(accepted);
        if accepted {
            state.reinforce(&tree, &report, config.normalize_increments);
        }
        // Rejected proposals leave the posteriors untouched.
    }
    Ok(FitOutcome { state, stalled: false })
}

/// Runs the accept/reinforce loop until `eta` proposals have been accepted.
pub fn fit<R: Rng + ?Sized>(
    config: &LearnerConfig,
    training_pairs: &[PairedComparison],
    rng: &mut R,
) -> Result<LearnerState, LearnError> {
    let outcome = fit_capped(config, training_pairs, rng)?;
    if outcome.stalled {
        return Err(LearnError::AcceptanceStall {
            accepted: outcome.state.accepted,
            proposed: outcome.state.proposed,
            eta: config.eta,
        });
    }
    Ok(outcome.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BetaCount, Direction};
    use crate::seed;
    use crate::synth::{generate, SynthConfig};

    fn pair(diffs: &[i8], outcome: bool) -> PairedComparison {
        PairedComparison::new(diffs.to_vec(), outcome).unwrap()
    }

    fn tree(order: &[usize], signs: &[i8]) -> LexTree {
        let directions = signs
            .iter()
            .map(|&s| if s > 0 { Direction::Positive } else { Direction::Negative })
            .collect();
        LexTree::new(order.to_vec(), directions).unwrap()
    }

    fn report(n: usize, score: f64, counts: &[u32]) -> EvalReport {
        EvalReport { n_pairs: n, score, correct_decisions: counts.to_vec() }
    }

    #[test]
    fn accept_test_boundary_is_inclusive() {
        assert!(accept_test(&report(10, 1.0, &[]), 0.1));
        assert!(accept_test(&report(10, 0.9, &[]), 0.1));
        assert!(!accept_test(&report(20, 0.85, &[]), 0.1));
    }

    #[test]
    fn config_bounds_are_enforced() {
        let ok = LearnerConfig::default();
        assert!(ok.validate().is_ok());
        assert!(LearnerConfig { epsilon: 1.0, ..ok.clone() }.validate().is_err());
        assert!(LearnerConfig { epsilon: -0.1, ..ok.clone() }.validate().is_err());
        assert!(LearnerConfig { phi: 0.0, ..ok.clone() }.validate().is_err());
        assert!(LearnerConfig { phi: 1.5, ..ok.clone() }.validate().is_err());
        assert!(LearnerConfig { eta: 0, ..ok.clone() }.validate().is_err());
        assert!(LearnerConfig { max_proposals: 5, eta: 10, ..ok }.validate().is_err());
    }

    #[test]
    fn subsample_size_rounds_up_without_float_slop() {
        assert_eq!(subsample_size(0.1, 1000), 100);
        assert_eq!(subsample_size(0.1, 28), 3);
        assert_eq!(subsample_size(1.0, 17), 17);
        assert_eq!(subsample_size(0.001, 10), 1);
    }

    #[test]
    fn reinforce_adds_success_counts() {
        // Cue 0 correctly discriminated on all 3 subsampled pairs: one full
        // rate success on the importance Beta, 3 balls on the direction Beta.
        let mut state = LearnerState::new(2);
        let t = tree(&[0, 1], &[1, 1]);
        state.reinforce(&t, &report(3, 1.0, &[3, 0]), false);
        assert_eq!(state.posteriors[0].importance, BetaCount::new(2.0, 1.0).unwrap());
        assert_eq!(state.posteriors[0].direction, BetaCount::new(4.0, 1.0).unwrap());
        assert_eq!(state.posteriors[1].importance, BetaCount::flat());
        assert_eq!(state.posteriors[1].direction, BetaCount::flat());
        assert_eq!(state.accepted, 1);
        assert_eq!(state.share_trace.len(), 1);
    }

    #[test]
    fn reinforce_negative_direction_adds_failures() {
        // 2 correct first discriminations out of 4 pairs: the importance
        // Beta observes rate 0.5; the negative direction sends the 2 balls
        // to the failure side.
        let mut state = LearnerState::new(2);
        let t = tree(&[0, 1], &[-1, 1]);
        state.reinforce(&t, &report(4, 1.0, &[2, 0]), false);
        assert_eq!(state.posteriors[0].direction, BetaCount::new(1.0, 3.0).unwrap());
        assert_eq!(state.posteriors[0].importance, BetaCount::new(1.5, 1.5).unwrap());
    }

    #[test]
    fn reinforce_with_zero_counts_changes_no_posterior() {
        let mut state = LearnerState::new(3);
        let before = state.posteriors.clone();
        let t = tree(&[0, 1, 2], &[1, 1, 1]);
        state.reinforce(&t, &report(6, 0.5, &[0, 0, 0]), false);
        assert_eq!(state.posteriors, before);
        assert_eq!(state.accepted, 1);
    }

    #[test]
    fn normalized_increments_divide_direction_updates_by_subsample_size() {
        let mut state = LearnerState::new(1);
        let t = tree(&[0], &[1]);
        state.reinforce(&t, &report(4, 1.0, &[2]), true);
        assert_eq!(state.posteriors[0].importance, BetaCount::new(1.5, 1.5).unwrap());
        assert_eq!(state.posteriors[0].direction, BetaCount::new(1.5, 1.0).unwrap());

        let mut raw = LearnerState::new(1);
        raw.reinforce(&t, &report(4, 1.0, &[2]), false);
        assert_eq!(raw.posteriors[0].direction, BetaCount::new(3.0, 1.0).unwrap());
    }

    #[test]
    fn accept_everything_returns_after_eta_proposals() {
        // Guesses floor the score at 0.5, so with the tolerance at its upper
        // bound no proposal can miss it.
        let config = LearnerConfig { epsilon: 1.0 - 1e-9, eta: 10, ..LearnerConfig::default() };
        let pairs = vec![pair(&[0, 0], true), pair(&[0, 0], false)];
        let state = fit(&config, &pairs, &mut seed::rng(0)).unwrap();
        assert_eq!(state.proposed, 10);
        assert_eq!(state.accepted, 10);
        assert_eq!(state.acceptance_trace, vec![true; 10]);
    }

    #[test]
    fn single_pair_perfect_tolerance_pins_the_posterior() {
        // Only the positive-direction tree ever scores 1.0, so after five
        // acceptances both Betas sit at B(6, 1).
        let config = LearnerConfig { epsilon: 0.0, phi: 1.0, eta: 5, ..LearnerConfig::default() };
        let pairs = vec![pair(&[1], true)];
        let state = fit(&config, &pairs, &mut seed::rng(1)).unwrap();
        assert_eq!(state.posteriors[0].importance, BetaCount::new(6.0, 1.0).unwrap());
        assert_eq!(state.posteriors[0].direction, BetaCount::new(6.0, 1.0).unwrap());
        assert_eq!(state.accepted, 5);
    }

    #[test]
    fn empty_training_is_an_error() {
        let config = LearnerConfig::default();
        assert_eq!(fit(&config, &[], &mut seed::rng(0)).unwrap_err(), LearnError::EmptyTraining);
    }

    #[test]
    fn contradictory_data_with_zero_tolerance_stalls() {
        let config = LearnerConfig {
            epsilon: 0.0,
            phi: 1.0,
            eta: 1,
            max_proposals: 50,
            ..LearnerConfig::default()
        };
        let pairs = vec![pair(&[1], true), pair(&[1], false)];
        let err = fit(&config, &pairs, &mut seed::rng(2)).unwrap_err();
        assert_eq!(err, LearnError::AcceptanceStall { accepted: 0, proposed: 50, eta: 1 });

        let capped = fit_capped(&config, &pairs, &mut seed::rng(2)).unwrap();
        assert!(capped.stalled);
        assert_eq!(capped.state.proposed, 50);
    }

    #[test]
    fn fit_is_deterministic_in_the_seed() {
        let config = LearnerConfig { eta: 30, ..LearnerConfig::default() };
        let pairs = generate(&SynthConfig { n: 200, ..SynthConfig::default() }, &mut seed::rng(3)).unwrap();
        let a = fit(&config, &pairs, &mut seed::rng(7)).unwrap();
        let b = fit(&config, &pairs, &mut seed::rng(7)).unwrap();
        assert_eq!(a, b);
        let c = fit(&config, &pairs, &mut seed::rng(8)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn pseudo_counts_are_monotone() {
        let config = LearnerConfig { eta: 40, epsilon: 0.3, ..LearnerConfig::default() };
        let pairs = generate(&SynthConfig { n: 300, ..SynthConfig::default() }, &mut seed::rng(4)).unwrap();
        let state = fit(&config, &pairs, &mut seed::rng(5)).unwrap();
        assert_eq!(state.accepted, 40);
        assert!(state.proposed >= 40);
        assert_eq!(state.acceptance_trace.iter().filter(|&&a| a).count(), 40);
        assert_eq!(state.share_trace.len(), 40);
        for row in &state.share_trace {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for p in &state.posteriors {
            assert!(p.importance.alpha() >= 1.0);
            assert!(p.importance.beta() >= 1.0);
            assert!(p.direction.alpha() >= 1.0);
            assert!(p.direction.beta() >= 1.0);
        }

        // Same seed, earlier stop: the shorter run is a prefix of the longer
        // one, so every pseudo-count of the longer run is at least as large.
        let short = fit(
            &LearnerConfig { eta: 20, epsilon: 0.3, ..LearnerConfig::default() },
            &pairs,
            &mut seed::rng(5),
        )
        .unwrap();
        assert_eq!(short.share_trace[..], state.share_trace[..20]);
        for (a, b) in short.posteriors.iter().zip(&state.posteriors) {
            assert!(b.importance.alpha() >= a.importance.alpha());
            assert!(b.importance.beta() >= a.importance.beta());
            assert!(b.direction.alpha() >= a.direction.alpha());
            assert!(b.direction.beta() >= a.direction.beta());
        }
    }

    #[test]
    fn rejected_proposals_leave_state_bit_identical() {
        // Contradictory data at zero tolerance: every proposal is rejected,
        // so the capped state must equal a fresh one except for the counters.
        let config = LearnerConfig {
            epsilon: 0.0,
            phi: 1.0,
            eta: 1,
            max_proposals: 200,
            ..LearnerConfig::default()
        };
        let pairs = vec![pair(&[1], true), pair(&[1], false)];
        let outcome = fit_capped(&config, &pairs, &mut seed::rng(10)).unwrap();
        assert!(outcome.stalled);
        let fresh = LearnerState::new(1);
        assert_eq!(outcome.state.posteriors, fresh.posteriors);
        assert_eq!(outcome.state.share_trace, fresh.share_trace);
        assert_eq!(outcome.state.accepted, 0);
        assert_eq!(outcome.state.proposed, 200);
        assert!(outcome.state.acceptance_trace.iter().all(|&a| !a));
    }

    #[test]
    fn fit_recovers_cue_ordering_on_synthetic_data() {
        let synth = SynthConfig { n: 600, ..SynthConfig::default() };
        let pairs = generate(&synth, &mut seed::rng(6)).unwrap();
        let config = LearnerConfig { epsilon: 0.1, phi: 0.1, eta: 60, ..LearnerConfig::default() };
        let state = fit(&config, &pairs, &mut seed::rng(9)).unwrap();
        let shares = state.importance_shares();
        assert!(shares[0] > shares[3], "shares = {shares:?}");
    }
}
