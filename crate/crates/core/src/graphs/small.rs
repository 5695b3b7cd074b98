//! Exhaustive enumeration of small constraint graphs, deduplicated by a
//! brute-force canonical form (minimum code over all relabellings).

use itertools::Itertools;

use crate::graphs::ConstraintGraph;

/// Bit code of `h` under the relabelling `perm`: one bit per unordered pair
/// `i <= j` of new labels, set when the pair is adjacent.
fn code_under(h: &ConstraintGraph, perm: &[usize]) -> u64 {
    let q = h.q();
    let mut inv = vec![0usize; q];
    for (old, &new) in perm.iter().enumerate() {
        inv[new] = old;
    }
    let mut code = 0u64;
    let mut bit = 0;
    for i in 0..q {
        for j in i..q {
            if h.adj(inv[i], inv[j]) {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

/// Canonical code of `h`: equal for isomorphic graphs of the same order.
/// Factorial in `q`; intended for `q <= 8`.
pub fn canonical_code(h: &ConstraintGraph) -> u64 {
    let q = h.q();
    (0..q).permutations(q).map(|p| code_under(h, &p)).min().unwrap_or(0)
}

/// Every labelled graph on `q` nodes, loops allowed.
pub fn all_labelled(q: usize) -> impl Iterator<Item = ConstraintGraph> {
    let pairs: Vec<(usize, usize)> = (0..q).flat_map(|i| (i..q).map(move |j| (i, j))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |code| {
        let edges = pairs.iter().enumerate().filter(|&(b, _)| code >> b & 1 == 1).map(|(_, &e)| e);
        ConstraintGraph::new(q, edges).expect("small graph")
    })
}

/// One representative per isomorphism class of connected graphs on exactly
/// `q` nodes with at least one edge (a loop counts as an edge).
pub fn connected_classes(q: usize) -> Vec<ConstraintGraph> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for h in all_labelled(q) {
        if !h.has_edge() || !h.is_connected() {
            continue;
        }
        if seen.insert(canonical_code(&h)) {
            out.push(h);
        }
    }
    out
}

/// [`connected_classes`] for every order `1..=max_q`.
pub fn connected_classes_up_to(max_q: usize) -> Vec<ConstraintGraph> {
    (1..=max_q).flat_map(connected_classes).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_code_is_relabelling_invariant() {
        let h = ConstraintGraph::hinge();
        let c = canonical_code(&h);
        for p in (0..3).permutations(3) {
            assert_eq!(canonical_code(&h.permuted(&p)), c);
        }
        assert_ne!(c, canonical_code(&ConstraintGraph::complete(3).unwrap()));
    }

    #[test]
    fn small_class_counts() {
        // q = 1: the looped node. q = 2: an edge with 0, 1 or 2 loops.
        assert_eq!(connected_classes(1).len(), 1);
        assert_eq!(connected_classes(2).len(), 3);
        // q = 3: the path with 6 loop patterns up to reflection, and the
        // triangle with 0..=3 loops.
        assert_eq!(connected_classes(3).len(), 10);
    }
}
