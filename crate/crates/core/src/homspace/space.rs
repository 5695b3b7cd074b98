use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, Board, ConstraintGraph};
use crate::homspace::enumerate::{enumerate_maps, validate_pins, EnumOptions};
use crate::homspace::HomMap;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns true if `a` and `b` were in different sets.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    /// No homomorphisms at all; counted as connected.
    pub empty: bool,
    pub connected: bool,
    pub components: usize,
    pub isolated: usize,
}

/// An enumerated homomorphism space with its flip graph. Two maps are
/// flip-adjacent when they differ at exactly one (unpinned) site.
#[derive(Clone, Debug)]
pub struct HomSpace {
    board: Board,
    h: ConstraintGraph,
    maps: Vec<HomMap>,
    flips: Vec<Vec<usize>>,
    pinned: Vec<bool>,
}

impl HomSpace {
    pub fn enumerate(g: &Board, h: &ConstraintGraph) -> Result<Self> {
        Self::enumerate_with(g, h, &EnumOptions::default())
    }

    pub fn enumerate_with(g: &Board, h: &ConstraintGraph, opts: &EnumOptions) -> Result<Self> {
        let maps = enumerate_maps(g, h, opts)?;
        let pinned: Vec<bool> = validate_pins(g, h, &opts.pins)?.iter().map(Option::is_some).collect();
        let index: HashMap<&[u8], usize> = maps.iter().enumerate().map(|(k, m)| (m.spins(), k)).collect();
        let mut flips = vec![Vec::new(); maps.len()];
        let mut buf = Vec::new();
        for (k, m) in maps.iter().enumerate() {
            buf.clear();
            buf.extend_from_slice(m.spins());
            for s in (0..g.n_sites()).filter(|&s| !pinned[s]) {
                let own = buf[s];
                let others = m.legal_spins(g, h, s) & !(1u64 << own);
                for c in bits(others) {
                    buf[s] = c as u8;
                    flips[k].push(index[buf.as_slice()]);
                }
                buf[s] = own;
            }
            flips[k].sort_unstable();
        }
        Ok(Self { board: g.clone(), h: h.clone(), maps, flips, pinned })
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn constraint(&self) -> &ConstraintGraph {
        &self.h
    }

    pub fn maps(&self) -> &[HomMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn pinned(&self) -> &[bool] {
        &self.pinned
    }

    /// Indices of the maps flip-adjacent to map `k`.
    pub fn flip_neighbors(&self, k: usize) -> &[usize] {
        &self.flips[k]
    }

    pub fn position(&self, map: &HomMap) -> Option<usize> {
        self.maps.binary_search(map).ok()
    }

    /// Connected components of the flip graph as sorted index lists, ordered
    /// by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.maps.len());
        for (k, nbrs) in self.flips.iter().enumerate() {
            for &j in nbrs {
                uf.union(k, j);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for k in 0..self.maps.len() {
            groups.entry(uf.find(k)).or_default().push(k);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort_unstable_by_key(|c| c[0]);
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn isolated_maps(&self) -> Vec<usize> {
        (0..self.maps.len()).filter(|&k| self.flips[k].is_empty()).collect()
    }

    pub fn connectivity(&self) -> ConnectivityReport {
        let components = self.components().len();
        ConnectivityReport {
            empty: self.maps.is_empty(),
            connected: components <= 1,
            components,
            isolated: self.isolated_maps().len(),
        }
    }
}

/// Flip-graph component of `start`, explored without enumerating the whole
/// space. Fails once more than `cap` maps have been reached.
pub fn flip_component(g: &Board, h: &ConstraintGraph, start: &HomMap, cap: usize) -> Result<Vec<HomMap>> {
    start.validate(g, h)?;
    let mut seen: HashSet<HomMap> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(m) = queue.pop_front() {
        for s in 0..g.n_sites() {
            let others = m.legal_spins(g, h, s) & !(1u64 << m.spins()[s]);
            for c in bits(others) {
                let next = m.with(s, c as u8);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded(cap as u64));
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: Vec<HomMap> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{weak_square, weak_square_projection};

    #[test]
    fn hard_core_grid_is_connected() {
        let hs = HomSpace::enumerate(&Board::grid_box(1, 2).unwrap(), &ConstraintGraph::hard_core()).unwrap();
        assert!(hs.is_connected());
        assert!(hs.isolated_maps().is_empty());
    }

    #[test]
    fn complete_board_into_complete_graph() {
        for q in 2..5 {
            let hs = HomSpace::enumerate(&Board::complete(q).unwrap(), &ConstraintGraph::complete(q).unwrap()).unwrap();
            let fact: usize = (1..=q).product();
            assert_eq!(hs.len(), fact);
            assert_eq!(hs.isolated_maps().len(), fact);
            assert_eq!(hs.components().len(), fact);
        }
    }

    #[test]
    fn weak_square_projection_isolated_for_triangle() {
        let h = ConstraintGraph::complete(3).unwrap();
        let g = weak_square(&h);
        let hs = HomSpace::enumerate(&g, &h).unwrap();
        let k = hs.position(&weak_square_projection(3, 0)).unwrap();
        assert!(hs.isolated_maps().contains(&k));
    }

    #[test]
    fn empty_space_is_connected() {
        let hs = HomSpace::enumerate(&Board::cycle(3).unwrap(), &ConstraintGraph::complete(2).unwrap()).unwrap();
        let r = hs.connectivity();
        assert!(r.empty && r.connected);
        assert_eq!(r.components, 0);
    }

    #[test]
    fn flip_component_matches_enumeration() {
        let g = Board::path(4).unwrap();
        let h = ConstraintGraph::hinge();
        let hs = HomSpace::enumerate(&g, &h).unwrap();
        let comp = flip_component(&g, &h, &hs.maps()[0], 10_000).unwrap();
        assert_eq!(comp, hs.maps());
    }

    #[test]
    fn pinned_sites_do_not_flip() {
        let g = Board::path(2).unwrap();
        let h = ConstraintGraph::hinge();
        let hs = HomSpace::enumerate_with(&g, &h, &EnumOptions::pinned(vec![(0, 1)])).unwrap();
        assert_eq!(hs.len(), 3);
        for k in 0..hs.len() {
            for &j in hs.flip_neighbors(k) {
                assert_eq!(hs.maps()[j].spins()[0], 1);
            }
        }
        assert!(hs.is_connected());
    }
}
