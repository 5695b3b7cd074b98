//! Leaf-to-root message passing on tree boards. Any site can serve as the
//! root, so conditionals at arbitrary sites are exact and cheap.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::{bits, Board, ConstraintGraph};
use crate::homspace::enumerate::validate_pins;
use crate::scalar::Scalar;

/// BFS order from `root` plus the parent of every site in that rooting.
fn rooted(g: &Board, root: usize) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    if root >= g.n_sites() {
        return Err(Error::IndexOutOfRange { index: root, len: g.n_sites() });
    }
    let order = g.bfs_order(root);
    let mut parent = vec![None; g.n_sites()];
    let mut seen = vec![false; g.n_sites()];
    seen[root] = true;
    for &u in &order {
        for &v in g.neighbors(u) {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some(u);
            }
        }
    }
    Ok((order, parent))
}

fn allowed_masks(g: &Board, h: &ConstraintGraph, pins: &[(usize, u8)]) -> Result<Vec<u64>> {
    Ok(validate_pins(g, h, pins)?.into_iter().map(|f| f.map_or(h.node_mask(), |c| 1u64 << c)).collect())
}

/// Exact spin law at `target` under the λ-measure on the tree board `g`,
/// conditioned on `pins`.
pub fn tree_marginal<T: Scalar>(
    g: &Board,
    h: &ConstraintGraph,
    lambda: &[T],
    pins: &[(usize, u8)],
    target: usize,
) -> Result<Vec<T>> {
    if lambda.len() != h.q() {
        return Err(Error::LengthMismatch { expected: h.q(), got: lambda.len() });
    }
    let (order, parent) = rooted(g, target)?;
    let allowed = allowed_masks(g, h, pins)?;
    let q = h.q();
    // msg[v][c]: weight of v's subtree given v has spin c (normalized).
    let mut msg: Vec<Vec<T>> = (0..g.n_sites())
        .map(|v| (0..q).map(|c| if allowed[v] >> c & 1 == 1 { lambda[c].clone() } else { T::zero() }).collect())
        .collect();
    for &v in order.iter().rev() {
        let total = msg[v].iter().cloned().fold(T::zero(), |a, b| a + b);
        if !total.is_positive() {
            return Err(Error::InconsistentBoundary);
        }
        for x in msg[v].iter_mut() {
            *x = x.clone() / total.clone();
        }
        if let Some(p) = parent[v] {
            let child = std::mem::take(&mut msg[v]);
            for c in 0..q {
                if msg[p][c].is_positive() {
                    let s = bits(h.row(c)).fold(T::zero(), |a, d| a + child[d].clone());
                    msg[p][c] = msg[p][c].clone() * s;
                }
            }
        }
    }
    Ok(msg.swap_remove(target))
}

/// Number of homomorphisms of the tree board agreeing with `pins`.
pub fn count_extensions(g: &Board, h: &ConstraintGraph, pins: &[(usize, u8)]) -> Result<BigUint> {
    let (order, parent) = rooted(g, 0)?;
    let allowed = allowed_masks(g, h, pins)?;
    let q = h.q();
    let mut cnt: Vec<Vec<BigUint>> = (0..g.n_sites())
        .map(|v| (0..q).map(|c| if allowed[v] >> c & 1 == 1 { BigUint::one() } else { BigUint::zero() }).collect())
        .collect();
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            let child = std::mem::take(&mut cnt[v]);
            for c in 0..q {
                if !cnt[p][c].is_zero() {
                    let s: BigUint = bits(h.row(c)).map(|d| &child[d]).sum();
                    cnt[p][c] *= s;
                }
            }
        }
    }
    Ok(cnt.swap_remove(0).into_iter().sum())
}

/// Bitmask of spins that `target` can take in some homomorphism agreeing
/// with `pins`.
pub fn feasible_spins(g: &Board, h: &ConstraintGraph, pins: &[(usize, u8)], target: usize) -> Result<u64> {
    let (order, parent) = rooted(g, target)?;
    let mut ok = allowed_masks(g, h, pins)?;
    for &v in order.iter().rev() {
        if let Some(p) = parent[v] {
            let reach = bits(ok[p]).filter(|&c| h.row(c) & ok[v] != 0).fold(0u64, |m, c| m | 1 << c);
            ok[p] = reach;
        }
    }
    Ok(ok[target])
}
