use crate::error::Result;
use crate::graphs::{Board, BoardMeta, ConstraintGraph};
use crate::homspace::HomMap;

/// The weak square of `h`: sites are ordered pairs `(a, b)` (index
/// `a*q + b`), with `(a, b) ~ (c, d)` iff `a ~ c` and `b ~ d` in `h`.
/// Self-pairs are dropped since boards are loopless.
pub fn weak_square(h: &ConstraintGraph) -> Board {
    let q = h.q();
    let mut edges = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in h.neighbors(a) {
                for d in h.neighbors(b) {
                    let (s, t) = (a * q + b, c * q + d);
                    if s < t {
                        edges.push((s, t));
                    }
                }
            }
        }
    }
    Board::new(q * q, edges).expect("weak square edges are in range").with_meta(BoardMeta::WeakSquare { q })
}

/// Projection of the weak square onto coordinate `which` (0 or 1).
pub fn weak_square_projection(q: usize, which: usize) -> HomMap {
    let spins = (0..q * q).map(|s| if which == 0 { s / q } else { s % q } as u8).collect();
    HomMap::new(spins)
}

/// The bipartite double `2H`: node `i` is `+i` and node `q + i` is `-i`;
/// `+i ~ -j` iff `i ~ j` in `h`. A loop at `i` becomes the edge `{+i, -i}`.
///
/// Fails only when `2q` exceeds the node limit.
pub fn double(h: &ConstraintGraph) -> Result<ConstraintGraph> {
    let q = h.q();
    let edges = h.edges().iter().flat_map(|&(i, j)| [(i, q + j), (j, q + i)]);
    ConstraintGraph::new(2 * q, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::is_bipartite;

    #[test]
    fn weak_square_of_hard_core() {
        let h = ConstraintGraph::hard_core();
        let g = weak_square(&h);
        assert_eq!(g.n_sites(), 4);
        // (1,1) is site 3; (0,1) is 1, (1,0) is 2, (0,0) is 0.
        assert!(g.adj(3, 1) && g.adj(3, 2) && g.adj(3, 0));
        // (0,1) ~ (1,0) since 0 ~ 1 in both coordinates.
        assert!(g.adj(1, 2));
        assert_eq!(g.edges(), &[(0, 3), (1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn weak_square_of_k2() {
        let g = weak_square(&ConstraintGraph::complete(2).unwrap());
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
    }

    #[test]
    fn double_of_loop_is_k2() {
        let d = double(&ConstraintGraph::single_looped_node()).unwrap();
        assert_eq!(d, ConstraintGraph::complete(2).unwrap());
    }

    #[test]
    fn double_of_triangle_is_k33_minus_matching() {
        let d = double(&ConstraintGraph::complete(3).unwrap()).unwrap();
        assert_eq!(d.q(), 6);
        assert_eq!(d.edges().len(), 6);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.adj(i, 3 + j), i != j);
                assert!(!d.adj(i, j));
            }
        }
    }

    #[test]
    fn double_of_hinge_is_bipartite() {
        let d = double(&ConstraintGraph::hinge()).unwrap();
        assert_eq!(d.q(), 6);
        assert!(is_bipartite(&d).is_some());
        assert_eq!(d.loops().count(), 0);
    }
}
