//! Proposal generation from the current cue posteriors.
//!
//! A proposal tree is built in three stages: draw a success probability per
//! cue from its importance Beta, turn those weights into a cue order by
//! sampling without replacement with successive renormalization, and draw a
//! direction per cue from its direction Beta.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::model::{CuePosterior, BetaCount, Direction, LexTree, ModelError};

// Beta draws are nudged into the open unit interval so downstream
// renormalization never sees an exact 0 or 1.
const OPEN_LO: f64 = 1e-12;
const OPEN_HI: f64 = 1.0 - 1e-12;

fn sample_beta<R: Rng + ?Sized>(count: &BetaCount, rng: &mut R) -> f64 {
    let draw = Beta::new(count.alpha(), count.beta())
        .expect("beta counts are positive by construction")
        .sample(rng);
    draw.clamp(OPEN_LO, OPEN_HI)
}

/// One independent draw from each cue's importance Beta.
pub fn sample_importance_weights<R: Rng + ?Sized>(
    posteriors: &[CuePosterior],
    rng: &mut R,
) -> Vec<f64> {
    posteriors.iter().map(|p| sample_beta(&p.importance, rng)).collect()
}

/// Samples a cue order without replacement: position 0 is drawn with
/// probability `w_i / Σw`, later positions by renormalizing over the cues
/// still unchosen.
pub fn sample_order<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Result<Vec<usize>, ModelError> {
    for (index, &value) in weights.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(ModelError::NonPositiveWeight { index, value });
        }
    }
    let mut remaining: Vec<usize> = (0..weights.len()).collect();
    let mut order = Vec::with_capacity(weights.len());
    while remaining.len() > 1 {
        let total: f64 = remaining.iter().map(|&i| weights[i]).sum();
        let mut x = rng.random_range(0.0..total);
        // Fall back to the last slot if float slop pushes x past the sum.
        let mut picked = remaining.len() - 1;
        for (slot, &cue) in remaining.iter().enumerate() {
            if x < weights[cue] {
                picked = slot;
                break;
            }
            x -= weights[cue];
        }
        order.push(remaining.swap_remove(picked));
    }
    order.extend(remaining);
    Ok(order)
}

/// One direction per cue: draw p from the cue's direction Beta, then positive
/// with probability p.
pub fn sample_directions<R: Rng + ?Sized>(
    posteriors: &[CuePosterior],
    rng: &mut R,
) -> Vec<Direction> {
    posteriors
        .iter()
        .map(|p| {
            let prob_positive = sample_beta(&p.direction, rng);
            if rng.random::<f64>() < prob_positive {
                Direction::Positive
            } else {
                Direction::Negative
            }
        })
        .collect()
}

/// Draws a full proposal tree from the posteriors.
pub fn propose_tree<R: Rng + ?Sized>(posteriors: &[CuePosterior], rng: &mut R) -> LexTree {
    let weights = sample_importance_weights(posteriors, rng);
    let order = sample_order(&weights, rng).expect("clamped beta draws are positive");
    let directions = sample_directions(posteriors, rng);
    LexTree::new(order, directions).expect("sampled order is a permutation")
}
