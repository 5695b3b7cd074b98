use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graphs::{bits, Board, ConstraintGraph};
use crate::homspace::HomMap;

/// Default bound on backtracking search nodes.
pub const DEFAULT_SEARCH_CAP: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct EnumOptions {
    /// Maximum number of backtracking nodes visited before giving up.
    pub search_cap: u64,
    /// Sites held at a fixed spin.
    pub pins: Vec<(usize, u8)>,
}

impl Default for EnumOptions {
    fn default() -> Self {
        Self { search_cap: DEFAULT_SEARCH_CAP, pins: Vec::new() }
    }
}

impl EnumOptions {
    pub fn pinned(pins: Vec<(usize, u8)>) -> Self {
        Self { pins, ..Self::default() }
    }
}

/// Pins must be in range and pairwise compatible with the board edges
/// between them.
pub(crate) fn validate_pins(g: &Board, h: &ConstraintGraph, pins: &[(usize, u8)]) -> Result<Vec<Option<u8>>> {
    let mut fixed = vec![None; g.n_sites()];
    for &(s, c) in pins {
        if s >= g.n_sites() {
            return Err(Error::IndexOutOfRange { index: s, len: g.n_sites() });
        }
        if c as usize >= h.q() {
            return Err(Error::IndexOutOfRange { index: c as usize, len: h.q() });
        }
        if fixed[s].is_some_and(|old| old != c) {
            return Err(Error::InconsistentBoundary);
        }
        fixed[s] = Some(c);
    }
    Ok(fixed)
}

/// Site order for backtracking: pinned sites first, then BFS outward from
/// them (so every unpinned site is reached through an assigned neighbour
/// where possible).
fn search_order(g: &Board, fixed: &[Option<u8>]) -> Vec<usize> {
    let n = g.n_sites();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| fixed[s].is_some()).collect();
    for &s in &queue {
        seen[s] = true;
    }
    let mut next_root = 0;
    loop {
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g.neighbors(u) {
                let v = v as usize;
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        while next_root < n && seen[next_root] {
            next_root += 1;
        }
        if next_root == n {
            break;
        }
        seen[next_root] = true;
        queue.push_back(next_root);
    }
    order
}

struct Search<'a> {
    g: &'a Board,
    h: &'a ConstraintGraph,
    order: Vec<usize>,
    domain: Vec<u64>,
    spins: Vec<u8>,
    assigned: Vec<bool>,
    trail: Vec<(usize, u64)>,
    visited: u64,
    cap: u64,
    out: Vec<HomMap>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> Result<()> {
        if depth == self.order.len() {
            self.out.push(HomMap::new(self.spins.clone()));
            return Ok(());
        }
        let site = self.order[depth];
        for c in bits(self.domain[site]) {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::CapExceeded(self.cap));
            }
            let mark = self.trail.len();
            let row = self.h.row(c);
            let mut dead = false;
            for &v in self.g.neighbors(site) {
                let v = v as usize;
                if self.assigned[v] {
                    continue;
                }
                let narrowed = self.domain[v] & row;
                if narrowed != self.domain[v] {
                    self.trail.push((v, self.domain[v]));
                    self.domain[v] = narrowed;
                }
                if narrowed == 0 {
                    dead = true;
                    break;
                }
            }
            if !dead {
                self.spins[site] = c as u8;
                self.assigned[site] = true;
                self.run(depth + 1)?;
                self.assigned[site] = false;
            }
            while self.trail.len() > mark {
                let (v, d) = self.trail.pop().unwrap();
                self.domain[v] = d;
            }
        }
        Ok(())
    }
}

/// All homomorphisms `g -> h` consistent with the pins, by backtracking with
/// forward checking. The result is complete and duplicate-free.
pub fn enumerate_maps(g: &Board, h: &ConstraintGraph, opts: &EnumOptions) -> Result<Vec<HomMap>> {
    let fixed = validate_pins(g, h, &opts.pins)?;
    let n = g.n_sites();
    let mut domain: Vec<u64> = fixed.iter().map(|f| f.map_or(h.node_mask(), |c| 1u64 << c)).collect();
    // Pinned neighbours constrain each other up front.
    for s in 0..n {
        if let Some(c) = fixed[s] {
            for &v in g.neighbors(s) {
                domain[v as usize] &= h.row(c as usize);
            }
        }
    }
    if domain.contains(&0) {
        return Ok(Vec::new());
    }
    let mut search = Search {
        g,
        h,
        order: search_order(g, &fixed),
        domain,
        spins: vec![0; n],
        assigned: vec![false; n],
        trail: Vec::new(),
        visited: 0,
        cap: opts.search_cap,
        out: Vec::new(),
    };
    search.run(0)?;
    let mut out = search.out;
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_into_hinge() {
        let maps =
            enumerate_maps(&Board::path(1).unwrap(), &ConstraintGraph::hinge(), &EnumOptions::default()).unwrap();
        assert_eq!(maps.len(), 3);
    }

    #[test]
    fn edge_into_hard_core() {
        let maps = enumerate_maps(&Board::complete(2).unwrap(), &ConstraintGraph::hard_core(), &EnumOptions::default())
            .unwrap();
        let spins: Vec<Vec<u8>> = maps.iter().map(|m| m.spins().to_vec()).collect();
        assert_eq!(spins, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn path_colourings() {
        let maps =
            enumerate_maps(&Board::path(3).unwrap(), &ConstraintGraph::complete(3).unwrap(), &EnumOptions::default())
                .unwrap();
        assert_eq!(maps.len(), 12);
    }

    #[test]
    fn odd_cycle_into_bipartite_is_empty() {
        let maps =
            enumerate_maps(&Board::cycle(5).unwrap(), &ConstraintGraph::complete(2).unwrap(), &EnumOptions::default())
                .unwrap();
        assert!(maps.is_empty());
    }

    #[test]
    fn cap_exceeded() {
        let opts = EnumOptions { search_cap: 10, pins: vec![] };
        let r = enumerate_maps(&Board::grid_box(2, 2).unwrap(), &ConstraintGraph::hard_core(), &opts);
        assert!(matches!(r, Err(Error::CapExceeded(10))));
    }

    #[test]
    fn pins_restrict() {
        let opts = EnumOptions::pinned(vec![(0, 0)]);
        let maps = enumerate_maps(&Board::path(3).unwrap(), &ConstraintGraph::complete(3).unwrap(), &opts).unwrap();
        assert_eq!(maps.len(), 4);
        assert!(maps.iter().all(|m| m.spins()[0] == 0));
        let clash = EnumOptions::pinned(vec![(0, 0), (1, 0)]);
        let none = enumerate_maps(&Board::path(3).unwrap(), &ConstraintGraph::complete(3).unwrap(), &clash).unwrap();
        assert!(none.is_empty());
    }
}
