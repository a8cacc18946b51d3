//! Domain types and the lexicographic evaluation semantics shared by the
//! rest of the crate.
//!
//! A [`PairedComparison`] encodes one decision instance as per-cue value
//! differences in `{-1, 0, +1}` plus a binary outcome. A [`LexTree`] inspects
//! cues in its order and lets the first discriminating cue decide; if no cue
//! discriminates the tree guesses.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Contract violations on the core types and operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("cue count mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cue difference {value} at index {index} is not in {{-1, 0, +1}}")]
    InvalidDiff { index: usize, value: i8 },
    #[error("order is not a permutation of 0..{k}")]
    InvalidOrder { k: usize },
    #[error("beta counts must be positive and finite (alpha={alpha}, beta={beta})")]
    InvalidBeta { alpha: f64, beta: f64 },
    #[error("weight {value} at index {index} is not positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("empty pair set")]
    EmptyPairs,
}

/// One paired comparison: per-cue differences (object A minus object B) and
/// whether A scored higher on the criterion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairedComparison {
    diffs: Vec<i8>,
    outcome: bool,
}

impl PairedComparison {
    /// Validates that every difference is in `{-1, 0, +1}`.
    pub fn new(diffs: Vec<i8>, outcome: bool) -> Result<Self, ModelError> {
        for (index, &value) in diffs.iter().enumerate() {
            if !(-1..=1).contains(&value) {
                return Err(ModelError::InvalidDiff { index, value });
            }
        }
        Ok(Self { diffs, outcome })
    }

    pub fn k(&self) -> usize {
        self.diffs.len()
    }

    pub fn diffs(&self) -> &[i8] {
        &self.diffs
    }

    /// `true` when object A scores higher on the criterion.
    pub fn outcome(&self) -> bool {
        self.outcome
    }

    /// The same comparison seen from the other side: negated differences,
    /// flipped outcome.
    pub fn mirror(&self) -> Self {
        Self {
            diffs: self.diffs.iter().map(|d| -d).collect(),
            outcome: !self.outcome,
        }
    }
}

/// Whether a cue is positively or negatively related to the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Positive,
    Negative,
}

impl Direction {
    pub fn sign(self) -> i8 {
        match self {
            Direction::Positive => 1,
            Direction::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Positive => Direction::Negative,
            Direction::Negative => Direction::Positive,
        }
    }
}

/// Positive pseudo-counts of a Beta distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaCount {
    alpha: f64,
    beta: f64,
}

impl BetaCount {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, ModelError> {
        if !(alpha.is_finite() && beta.is_finite() && alpha > 0.0 && beta > 0.0) {
            return Err(ModelError::InvalidBeta { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    /// The uniform prior `B(1, 1)`.
    pub fn flat() -> Self {
        Self { alpha: 1.0, beta: 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn add_successes(&mut self, weight: f64) {
        debug_assert!(weight.is_finite() && weight >= 0.0);
        self.alpha += weight;
    }

    pub fn add_failures(&mut self, weight: f64) {
        debug_assert!(weight.is_finite() && weight >= 0.0);
        self.beta += weight;
    }
}

/// Per-cue posterior: one Beta over importance and one over the probability
/// that the cue direction is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuePosterior {
    pub importance: BetaCount,
    pub direction: BetaCount,
}

impl CuePosterior {
    /// Uninformative prior on both components.
    pub fn flat() -> Self {
        Self {
            importance: BetaCount::flat(),
            direction: BetaCount::flat(),
        }
    }
}

/// What a tree decided on one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    A,
    B,
    Guess,
}

/// Result of evaluating a tree on one pair. `deciding_cue` is present exactly
/// when some cue discriminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Prediction {
    pub choice: Choice,
    pub deciding_cue: Option<usize>,
}

/// A lexicographic decision tree: a total cue order (position 0 is inspected
/// first) plus one direction per cue, indexed by cue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexTree {
    order: Vec<usize>,
    directions: Vec<Direction>,
}

impl LexTree {
    pub fn new(order: Vec<usize>, directions: Vec<Direction>) -> Result<Self, ModelError> {
        let k = order.len();
        if directions.len() != k {
            return Err(ModelError::DimensionMismatch { expected: k, got: directions.len() });
        }
        let mut seen = vec![false; k];
        for &cue in &order {
            if cue >= k || seen[cue] {
                return Err(ModelError::InvalidOrder { k });
            }
            seen[cue] = true;
        }
        Ok(Self { order, directions })
    }

    pub fn k(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Walks the cue order; the first cue with a nonzero difference decides.
    /// A positive product of difference and direction favours A, a negative
    /// one favours B. No discriminating cue means a guess.
    pub fn evaluate(&self, pair: &PairedComparison) -> Result<Prediction, ModelError> {
        if pair.k() != self.k() {
            return Err(ModelError::DimensionMismatch { expected: self.k(), got: pair.k() });
        }
        for &cue in &self.order {
            let diff = pair.diffs()[cue];
            if diff != 0 {
                let choice = if diff * self.directions[cue].sign() > 0 {
                    Choice::A
                } else {
                    Choice::B
                };
                return Ok(Prediction { choice, deciding_cue: Some(cue) });
            }
        }
        Ok(Prediction { choice: Choice::Guess, deciding_cue: None })
    }
}

/// Subsample accuracy plus per-cue counts of first discriminations.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub n_pairs: usize,
    /// Fraction correct, with guesses scored 0.5.
    pub score: f64,
    /// Per cue: pairs where this cue discriminated first and the decision was
    /// correct (or merely discriminated first, under `count_all_decisions`).
    pub correct_decisions: Vec<u32>,
}

pub(crate) fn decision_matches(choice: Choice, outcome: bool) -> bool {
    matches!((choice, outcome), (Choice::A, true) | (Choice::B, false))
}

/// Scores `tree` over an iterator of pairs. A correct decision contributes 1
/// to the score, a wrong one 0, a guess 0.5.
pub fn score_pairs<'a, I>(
    tree: &LexTree,
    pairs: I,
    count_all_decisions: bool,
) -> Result<EvalReport, ModelError>
where
    I: IntoIterator<Item = &'a PairedComparison>,
{
    let mut n_pairs = 0usize;
    // Sums of halves are exact in binary floating point.
    let mut total = 0.0f64;
    let mut correct_decisions = vec![0u32; tree.k()];
    for pair in pairs {
        let prediction = tree.evaluate(pair)?;
        match prediction.deciding_cue {
            None => total += 0.5,
            Some(cue) => {
                let correct = decision_matches(prediction.choice, pair.outcome());
                if correct {
                    total += 1.0;
                }
                if correct || count_all_decisions {
                    correct_decisions[cue] += 1;
                }
            }
        }
        n_pairs += 1;
    }
    if n_pairs == 0 {
        return Err(ModelError::EmptyPairs);
    }
    Ok(EvalReport { n_pairs, score: total / n_pairs as f64, correct_decisions })
}

/// Scores `tree` on a slice of pairs, counting only correct first
/// discriminations.
pub fn score_subsample(tree: &LexTree, pairs: &[PairedComparison]) -> Result<EvalReport, ModelError> {
    score_pairs(tree, pairs, false)
}

/// Each cue's posterior-mean importance divided by the sum over all cues.
/// The shares sum to 1.
pub fn importance_shares(posteriors: &[CuePosterior]) -> Vec<f64> {
    let total: f64 = posteriors.iter().map(|p| p.importance.mean()).sum();
    posteriors.iter().map(|p| p.importance.mean() / total).collect()
}
