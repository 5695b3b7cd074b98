use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, Board, ConstraintGraph};
use crate::homspace::{feasible_spins, HomMap};
use crate::treegibbs::{RootSpin, TreeConfig};

/// A rigid proper `q`-colouring of `tree(r, depth)` with `q = r + 1`: the
/// children of every site show every colour except the site's own. The root
/// has `r + 1` children, so one colour appears twice there.
pub fn frozen_coloring(r: usize, q: usize, depth: usize, seed: u64) -> Result<TreeConfig> {
    if r == 0 || q != r + 1 {
        return Err(Error::FrozenArity { q, r });
    }
    let board = Board::tree(r, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spins = vec![0u8; board.n_sites()];
    spins[0] = rng.random_range(0..q) as u8;
    for s in 0..board.n_sites() {
        let children = board.tree_children(s).expect("tree board");
        if children.is_empty() {
            continue;
        }
        let mut colours: Vec<u8> = (0..q as u8).filter(|&c| c != spins[s]).collect();
        if children.len() > colours.len() {
            let extra = colours[rng.random_range(0..colours.len())];
            colours.push(extra);
        }
        colours.shuffle(&mut rng);
        for (c, colour) in children.into_iter().zip(colours) {
            spins[c] = colour;
        }
    }
    Ok(TreeConfig { board, map: HomMap::new(spins), root: RootSpin::Constructed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthProbe {
    pub depth: usize,
    /// Root spins reachable by some map agreeing with the candidate on the
    /// sphere at this depth.
    pub feasible: Vec<usize>,
    pub excluded: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongRangeReport {
    pub probes: Vec<DepthProbe>,
    /// Spins excluded at every tested depth.
    pub excluded_at_all_depths: Vec<usize>,
    /// Some spin stays excluded up to the tested depth. This certifies
    /// nothing beyond that depth.
    pub long_range_action: bool,
}

/// Pins `candidate` on the sphere of radius `n` for `n = 1..=depth` and
/// computes which root spins remain possible, by exact tree DP.
///
/// Without a candidate, `h` must be the loopless `K_{r+1}` and the frozen
/// colouring (seed 0) is used.
pub fn long_range_action_probe(
    h: &ConstraintGraph,
    r: usize,
    depth: usize,
    candidate: Option<&HomMap>,
) -> Result<LongRangeReport> {
    let frozen;
    let phi = match candidate {
        Some(m) => m,
        None => {
            let complete =
                h.loops().next().is_none() && (0..h.q()).all(|i| h.row(i).count_ones() as usize == h.q() - 1);
            if !(complete && h.q() == r + 1) {
                return Err(Error::Invalid("a candidate map is required unless H is K_(r+1)".into()));
            }
            frozen = frozen_coloring(r, h.q(), depth, 0)?;
            &frozen.map
        }
    };
    phi.validate(&Board::tree(r, depth)?, h)?;
    let mut probes = Vec::with_capacity(depth);
    let mut excluded_all = h.node_mask();
    for n in 1..=depth {
        // Shallower trees are index prefixes of deeper ones.
        let board = Board::tree(r, n)?;
        let pins: Vec<(usize, u8)> =
            board.tree_level(n).expect("tree board").into_iter().map(|s| (s, phi.spins()[s])).collect();
        let feasible = feasible_spins(&board, h, &pins, 0)?;
        let excluded = h.node_mask() & !feasible;
        excluded_all &= excluded;
        probes.push(DepthProbe { depth: n, feasible: bits(feasible).collect(), excluded: bits(excluded).collect() });
    }
    if depth == 0 {
        excluded_all = 0;
    }
    Ok(LongRangeReport {
        probes,
        excluded_at_all_depths: bits(excluded_all).collect(),
        long_range_action: excluded_all != 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homspace::count_extensions;
    use num_bigint::BigUint;

    #[test]
    fn frozen_colouring_is_proper_and_rigid() {
        let h = ConstraintGraph::complete(3).unwrap();
        for seed in 0..4 {
            let cfg = frozen_coloring(2, 3, 3, seed).unwrap();
            assert!(cfg.map.is_valid(&cfg.board, &h));
            for s in 0..cfg.board.n_sites() {
                let kids = cfg.board.tree_children(s).unwrap();
                if kids.is_empty() {
                    continue;
                }
                let mut seen: Vec<u8> = kids.iter().map(|&c| cfg.map.spins()[c]).collect();
                seen.sort_unstable();
                seen.dedup();
                assert_eq!(seen.len(), 2);
            }
            let pins: Vec<(usize, u8)> =
                cfg.board.tree_level(3).unwrap().into_iter().map(|s| (s, cfg.map.spins()[s])).collect();
            assert_eq!(count_extensions(&cfg.board, &h, &pins).unwrap(), BigUint::from(1u32));
        }
    }

    #[test]
    fn wrong_arity_rejected() {
        assert!(matches!(frozen_coloring(2, 4, 2, 0), Err(Error::FrozenArity { q: 4, r: 2 })));
    }

    #[test]
    fn triangle_has_long_range_action() {
        let rep = long_range_action_probe(&ConstraintGraph::complete(3).unwrap(), 2, 6, None).unwrap();
        assert!(rep.long_range_action);
        assert_eq!(rep.excluded_at_all_depths.len(), 2);
    }

    #[test]
    fn bipartite_path_remembers_its_side() {
        let h = ConstraintGraph::complete(2).unwrap();
        let board = Board::tree(1, 5).unwrap();
        let level = board.meta().clone();
        let spins = match level {
            crate::graphs::BoardMeta::Tree { level, .. } => level.iter().map(|l| (l % 2) as u8).collect(),
            _ => unreachable!(),
        };
        let rep = long_range_action_probe(&h, 1, 5, Some(&HomMap::new(spins))).unwrap();
        assert_eq!(rep.excluded_at_all_depths, vec![1]);
    }

    #[test]
    fn dismantlable_graph_has_none() {
        let h = ConstraintGraph::hinge();
        let board = Board::tree(2, 4).unwrap();
        let phi = HomMap::new(vec![2; board.n_sites()]);
        let rep = long_range_action_probe(&h, 2, 4, Some(&phi)).unwrap();
        assert!(!rep.long_range_action);
        // Green cannot touch red, but two steps suffice to get past it.
        assert_eq!(rep.probes[0].excluded, vec![0]);
        assert!(rep.probes[1..].iter().all(|p| p.excluded.is_empty()));
    }
}
