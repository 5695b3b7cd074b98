//! Constraint graphs, boards, and the graphs derived from them.

mod board;
mod constraint;
mod derived;
pub mod io;
pub mod small;
mod vectors;

use std::collections::VecDeque;

pub use board::{tree_site_count, Board, BoardMeta, BoardSpec, DEFAULT_SITE_CAP};
pub use constraint::{bits, ConstraintGraph, StandardGraph};
pub use derived::{double, weak_square, weak_square_projection};
pub use vectors::{ActivityVector, WeightVector};

/// Largest constraint graph supported; adjacency rows are `u64` bitsets.
pub const MAX_NODES: usize = 64;

/// Read-only neighbourhood access shared by constraint graphs and boards.
pub trait Adjacency {
    fn node_count(&self) -> usize;
    fn neighbor_list(&self, i: usize) -> Vec<usize>;
    fn has_loop(&self, i: usize) -> bool;
}

/// BFS 2-colouring. Returns the side of every node (`false` for the side
/// holding the lowest index of each component) or `None` if the graph has
/// an odd cycle or a loop.
pub fn is_bipartite<G: Adjacency + ?Sized>(g: &G) -> Option<Vec<bool>> {
    let n = g.node_count();
    if (0..n).any(|i| g.has_loop(i)) {
        return None;
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for v in g.neighbor_list(u) {
                match side[v] {
                    None => {
                        side[v] = Some(!su);
                        queue.push_back(v);
                    }
                    Some(sv) if sv == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(Option::unwrap).collect())
}
