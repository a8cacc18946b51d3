//! Growing Take-The-Best-style lexicographic decision trees from cue
//! building blocks.
//!
//! The learner keeps two Beta posteriors per cue — one for importance, one
//! for direction — and repeats a simple loop: draw a proposal tree from the
//! posteriors, score it on a random subsample of the training pairs, accept
//! it when the error is within tolerance, and reinforce the cues that
//! correctly discriminated. Predictions come from an ensemble of trees
//! sampled from the learned posteriors, decided by majority vote.
//!
//! The crate also ships the deterministic comparison models (validity-ordered
//! TTB and a small CART), a synthetic ground-truth data generator, CSV
//! ingestion with object-wise train/test splits, and the three experiment
//! harnesses built on top (recovery traces, model comparison, effort grid).
//!
//! All randomness flows through explicit RNGs seeded via [`seed`], so every
//! result is reproducible from its configuration and a 64-bit seed.

pub mod baselines;
pub mod data;
pub mod experiments;
pub mod learn;
pub mod model;
pub mod predict;
pub mod proposal;
pub mod seed;
pub mod synth;

pub use baselines::{CartParams, CartTree, ClassicTtb};
pub use data::{build_pairs, load_dataset, load_objects_csv, split_objects, Dataset, ObjectTable};
pub use learn::{accept_test, fit, fit_capped, LearnError, LearnerConfig, LearnerState};
pub use model::{
    importance_shares, score_subsample, BetaCount, Choice, CuePosterior, Direction, EvalReport,
    LexTree, ModelError, PairedComparison, Prediction,
};
pub use predict::{mean_correct_predictions, predict_pair, EnsembleChoice, EnsemblePrediction};
pub use proposal::{propose_tree, sample_directions, sample_importance_weights, sample_order};
pub use synth::{generate, SynthConfig};
