use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, ConstraintGraph};

/// A recorded dismantling: each step folds `folded` onto `absorbing`
/// (original node indices) in the graph left by the previous steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldSequence {
    pub steps: Vec<(usize, usize)>,
}

impl FoldSequence {
    /// Re-applies every step to `h`, checking `N(i) ⊆ N(j)` in the current
    /// reduced graph. Returns the surviving node, which must be looped.
    pub fn replay(&self, h: &ConstraintGraph) -> Result<usize> {
        let mut alive = h.node_mask();
        for &(i, j) in &self.steps {
            if i == j || alive >> i & 1 == 0 || alive >> j & 1 == 0 {
                return Err(Error::Invalid(format!("fold ({i}, {j}) uses a removed node")));
            }
            if h.row(i) & alive & !h.row(j) != 0 {
                return Err(Error::Invalid(format!("N({i}) is not inside N({j})")));
            }
            alive &= !(1 << i);
        }
        if alive.count_ones() != 1 {
            return Err(Error::Invalid(format!("{} nodes remain", alive.count_ones())));
        }
        let last = alive.trailing_zeros() as usize;
        if !h.is_looped(last) {
            return Err(Error::Invalid(format!("final node {last} is not looped")));
        }
        Ok(last)
    }
}

/// Lexicographically least `(i, j)`, `i != j`, with `N(i) ⊆ N(j)` in the
/// subgraph induced by `alive`.
pub fn find_fold_in(h: &ConstraintGraph, alive: u64) -> Option<(usize, usize)> {
    for i in bits(alive) {
        let ni = h.row(i) & alive;
        for j in bits(alive) {
            if i != j && ni & !h.row(j) == 0 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Lexicographically least fold pair of `h`, if any. `N(i)` contains `i`
/// exactly when `i` is looped.
pub fn find_fold(h: &ConstraintGraph) -> Option<(usize, usize)> {
    find_fold_in(h, h.node_mask())
}

/// Greedily folds until one node is left. Returns `None` if the process
/// gets stuck, or ends on an unlooped node.
pub fn dismantle(h: &ConstraintGraph) -> Option<FoldSequence> {
    let mut alive = h.node_mask();
    let mut steps = Vec::with_capacity(h.q().saturating_sub(1));
    while alive.count_ones() > 1 {
        let (i, j) = find_fold_in(h, alive)?;
        steps.push((i, j));
        alive &= !(1 << i);
    }
    let last = alive.trailing_zeros() as usize;
    h.is_looped(last).then_some(FoldSequence { steps })
}
