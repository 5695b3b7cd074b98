//! Exact solution of the cop-and-robber pursuit game.
//!
//! Positions are `(cop, robber, side to move)` after both players have
//! placed themselves. Every move goes to an adjacent node, so a player can
//! stay put only on a looped node. The cop captures by moving onto the
//! robber; the robber may share the cop's node. The cop's winning region is
//! the least fixed point (attractor) of the capture predicate; every other
//! position lets the robber survive forever.

use crate::error::{Error, Result};
use crate::graphs::{bits, ConstraintGraph};

/// Cop-winning positions, indexed `[cop * q + robber]`, one table per side
/// to move.
#[derive(Clone, Debug)]
pub struct CopAttractor {
    q: usize,
    pub cop_to_move: Vec<bool>,
    pub robber_to_move: Vec<bool>,
}

impl CopAttractor {
    pub fn compute(h: &ConstraintGraph) -> Self {
        let q = h.q();
        let mut cop = vec![false; q * q];
        let mut rob = vec![false; q * q];
        loop {
            let mut changed = false;
            for c in 0..q {
                for r in 0..q {
                    let idx = c * q + r;
                    if !cop[idx] {
                        let wins = h.neighbors(c).any(|c2| c2 == r || rob[c2 * q + r]);
                        if wins {
                            cop[idx] = true;
                            changed = true;
                        }
                    }
                    if !rob[idx] {
                        let trapped = h.row(r) != 0 && h.neighbors(r).all(|r2| cop[c * q + r2]);
                        if trapped {
                            rob[idx] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Self { q, cop_to_move: cop, robber_to_move: rob }
    }

    /// Cop start positions from which every robber placement loses.
    pub fn winning_starts(&self) -> Vec<usize> {
        (0..self.q).filter(|&c| (0..self.q).all(|r| self.cop_to_move[c * self.q + r])).collect()
    }
}

/// Whether the cop has a winning strategy on `h`. `h` must be connected
/// with at least one edge.
pub fn cop_win(h: &ConstraintGraph) -> Result<bool> {
    if !h.has_edge() || !h.is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(!CopAttractor::compute(h).winning_starts().is_empty())
}

/// Robber strategy witness for a robber-win graph: for each cop start, a
/// robber placement outside the attractor.
pub fn robber_replies(h: &ConstraintGraph) -> Vec<Option<usize>> {
    let a = CopAttractor::compute(h);
    let q = h.q();
    (0..q).map(|c| bits(h.node_mask()).find(|&r| !a.cop_to_move[c * q + r])).collect()
}
