//! Comparison models: classic validity-ordered TTB and a small CART-style
//! classification tree over the cue differences.

use serde::{Deserialize, Serialize};

use crate::model::{Direction, LexTree, ModelError, PairedComparison, Prediction};

/// Deterministic lexicographic baseline ordered by classic cue validity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicTtb {
    order: Vec<usize>,
    directions: Vec<Direction>,
    validities: Vec<f64>,
}

impl ClassicTtb {
    /// Estimates per-cue validity over the discriminating pairs, flips cues
    /// whose raw agreement falls below 0.5, and orders cues by validity
    /// (ties broken by ascending cue index). Cues that never discriminate
    /// get validity 0.5 and a positive direction.
    pub fn fit(pairs: &[PairedComparison]) -> Result<Self, ModelError> {
        let Some(first) = pairs.first() else {
            return Err(ModelError::EmptyPairs);
        };
        let k = first.k();
        let mut directions = vec![Direction::Positive; k];
        let mut validities = vec![0.5; k];
        for cue in 0..k {
            let mut discriminating = 0usize;
            let mut agreeing = 0usize;
            for pair in pairs {
                if pair.k() != k {
                    return Err(ModelError::DimensionMismatch { expected: k, got: pair.k() });
                }
                let diff = pair.diffs()[cue];
                if diff == 0 {
                    continue;
                }
                discriminating += 1;
                if (diff > 0) == pair.outcome() {
                    agreeing += 1;
                }
            }
            if discriminating == 0 {
                continue;
            }
            let raw = agreeing as f64 / discriminating as f64;
            if raw >= 0.5 {
                validities[cue] = raw;
            } else {
                validities[cue] = 1.0 - raw;
                directions[cue] = Direction::Negative;
            }
        }
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| {
            validities[b].partial_cmp(&validities[a]).unwrap().then(a.cmp(&b))
        });
        Ok(Self { order, directions, validities })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    /// Per-cue validities (indexed by cue, not by order position).
    pub fn validities(&self) -> &[f64] {
        &self.validities
    }

    pub fn to_lex_tree(&self) -> LexTree {
        LexTree::new(self.order.clone(), self.directions.clone())
            .expect("fitted order is a permutation")
    }

    /// Same semantics as evaluating the equivalent lexicographic tree.
    pub fn predict(&self, pair: &PairedComparison) -> Result<Prediction, ModelError> {
        self.to_lex_tree().evaluate(pair)
    }
}

/// CART hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for CartParams {
    fn default() -> Self {
        Self { max_depth: 10, min_leaf: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum CartNode {
    Leaf {
        class: bool,
        proportion: f64,
    },
    Split {
        cue: usize,
        threshold: f64,
        left: Box<CartNode>,
        right: Box<CartNode>,
    },
}

/// Greedy Gini-split classification tree over cue differences. Training data
/// is mirror-augmented (every pair plus its mirror) so the learned rule
/// treats the two objects symmetrically.
#[derive(Debug, Clone, PartialEq)]
pub struct CartTree {
    root: CartNode,
    k: usize,
}

fn gini(ones: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = ones as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

impl CartTree {
    pub fn fit(pairs: &[PairedComparison], params: &CartParams) -> Result<Self, ModelError> {
        let Some(first) = pairs.first() else {
            return Err(ModelError::EmptyPairs);
        };
        let k = first.k();
        let mut data: Vec<PairedComparison> = Vec::with_capacity(pairs.len() * 2);
        for pair in pairs {
            if pair.k() != k {
                return Err(ModelError::DimensionMismatch { expected: k, got: pair.k() });
            }
            data.push(pair.clone());
            data.push(pair.mirror());
        }
        let indices: Vec<usize> = (0..data.len()).collect();
        let root = build_node(&data, &indices, 0, params, k);
        Ok(Self { root, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn predict(&self, pair: &PairedComparison) -> Result<bool, ModelError> {
        if pair.k() != self.k {
            return Err(ModelError::DimensionMismatch { expected: self.k, got: pair.k() });
        }
        let mut node = &self.root;
        loop {
            match node {
                CartNode::Leaf { class, .. } => return Ok(*class),
                CartNode::Split { cue, threshold, left, right } => {
                    node = if (pair.diffs()[*cue] as f64) <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(node: &CartNode) -> usize {
            match node {
                CartNode::Leaf { .. } => 0,
                CartNode::Split { left, right, .. } => 1 + walk(left).max(walk(right)),
            }
        }
        walk(&self.root)
    }

    pub fn n_leaves(&self) -> usize {
        fn walk(node: &CartNode) -> usize {
            match node {
                CartNode::Leaf { .. } => 1,
                CartNode::Split { left, right, .. } => walk(left) + walk(right),
            }
        }
        walk(&self.root)
    }
}

fn build_node(
    data: &[PairedComparison],
    indices: &[usize],
    depth: usize,
    params: &CartParams,
    k: usize,
) -> CartNode {
    let total = indices.len();
    let ones = indices.iter().filter(|&&i| data[i].outcome()).count();
    let leaf = || CartNode::Leaf {
        class: 2 * ones >= total,
        proportion: ones as f64 / total as f64,
    };
    if ones == 0 || ones == total || depth >= params.max_depth {
        return leaf();
    }

    // Pick the valid split with the smallest weighted Gini impurity; ties go
    // to the lowest cue index, then the lower threshold. A zero-gain split is
    // still taken while the node is impure, so interaction structure beneath
    // an uninformative split stays reachable.
    let mut best: Option<(f64, usize, f64)> = None;
    for cue in 0..k {
        for threshold in [-0.5f64, 0.5] {
            let mut left = (0usize, 0usize);
            let mut right = (0usize, 0usize);
            for &i in indices {
                let side = if (data[i].diffs()[cue] as f64) <= threshold { &mut left } else { &mut right };
                side.0 += 1;
                if data[i].outcome() {
                    side.1 += 1;
                }
            }
            if left.0 < params.min_leaf || right.0 < params.min_leaf {
                continue;
            }
            let weighted = (left.0 as f64 * gini(left.1, left.0)
                + right.0 as f64 * gini(right.1, right.0))
                / total as f64;
            if best.map_or(true, |(w, _, _)| weighted < w - 1e-12) {
                best = Some((weighted, cue, threshold));
            }
        }
    }
    let Some((_, cue, threshold)) = best else {
        return leaf();
    };
    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
        indices.iter().partition(|&&i| (data[i].diffs()[cue] as f64) <= threshold);
    CartNode::Split {
        cue,
        threshold,
        left: Box::new(build_node(data, &left_idx, depth + 1, params, k)),
        right: Box::new(build_node(data, &right_idx, depth + 1, params, k)),
    }
}
