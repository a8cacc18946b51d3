//! Synthetic paired-comparison data drawn from a known lexicographic
//! ground truth.
//!
//! Each cue difference is drawn independently (draw / win / loss); the
//! outcome is decided by the first informative cue, in index order, that
//! discriminates. If none does, the outcome is a fair coin, which makes any
//! cue beyond `k_informative` pure noise.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Direction, LexTree, PairedComparison};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    /// Number of pairs to generate.
    pub n: usize,
    /// Total number of cues.
    pub k_cues: usize,
    /// Leading cues that actually decide outcomes.
    pub k_informative: usize,
    pub p_draw: f64,
    pub p_win: f64,
    pub p_loss: f64,
    /// Optional per-cue ground-truth direction flips (defaults to all
    /// positive).
    pub direction_flips: Option<Vec<bool>>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n: 1000,
            k_cues: 4,
            k_informative: 3,
            p_draw: 0.5,
            p_win: 0.25,
            p_loss: 0.25,
            direction_flips: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("draw/win/loss probabilities must be non-negative and sum to 1")]
    BadProbabilities,
    #[error("k_informative ({k_informative}) exceeds k_cues ({k_cues})")]
    TooManyInformative { k_informative: usize, k_cues: usize },
    #[error("direction_flips must have one entry per cue")]
    BadFlipMask,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let sum = self.p_draw + self.p_win + self.p_loss;
        if self.p_draw < 0.0 || self.p_win < 0.0 || self.p_loss < 0.0 || (sum - 1.0).abs() > 1e-9 {
            return Err(SynthError::BadProbabilities);
        }
        if self.k_informative > self.k_cues {
            return Err(SynthError::TooManyInformative {
                k_informative: self.k_informative,
                k_cues: self.k_cues,
            });
        }
        if let Some(flips) = &self.direction_flips {
            if flips.len() != self.k_cues {
                return Err(SynthError::BadFlipMask);
            }
        }
        Ok(())
    }

    fn directions(&self) -> Vec<Direction> {
        match &self.direction_flips {
            None => vec![Direction::Positive; self.k_cues],
            Some(flips) => flips
                .iter()
                .map(|&f| if f { Direction::Negative } else { Direction::Positive })
                .collect(),
        }
    }

    /// The ground-truth tree: cues in index order with the configured
    /// directions. Useful as an accuracy ceiling.
    pub fn generating_tree(&self) -> LexTree {
        LexTree::new((0..self.k_cues).collect(), self.directions())
            .expect("index order is a permutation")
    }
}

/// Outcome dictated by the ground truth for a diff vector, or `None` when no
/// informative cue discriminates.
fn truth_outcome(diffs: &[i8], k_informative: usize, directions: &[Direction]) -> Option<bool> {
    for cue in 0..k_informative {
        let diff = diffs[cue];
        if diff != 0 {
            return Some(diff * directions[cue].sign() > 0);
        }
    }
    None
}

/// Draws `config.n` pairs. Diffs are iid draw/win/loss per cue; outcomes
/// follow the generating tree, with undiscriminated pairs decided by a fair
/// coin.
pub fn generate<R: Rng + ?Sized>(
    config: &SynthConfig,
    rng: &mut R,
) -> Result<Vec<PairedComparison>, SynthError> {
    config.validate()?;
    let directions = config.directions();
    let mut pairs = Vec::with_capacity(config.n);
    for _ in 0..config.n {
        let diffs: Vec<i8> = (0..config.k_cues)
            .map(|_| {
                let u: f64 = rng.random();
                if u < config.p_draw {
                    0
                } else if u < config.p_draw + config.p_win {
                    1
                } else {
                    -1
                }
            })
            .collect();
        let outcome = match truth_outcome(&diffs, config.k_informative, &directions) {
            Some(outcome) => outcome,
            None => rng.random::<bool>(),
        };
        pairs.push(PairedComparison::new(diffs, outcome).expect("generated diffs are in range"));
    }
    Ok(pairs)
}
