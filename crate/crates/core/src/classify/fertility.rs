use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::ConstraintGraph;

/// Why a graph is fertile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violated", rename_all = "snake_case")]
pub enum FertilityWitness {
    /// A looped node missing an edge to some other node.
    LoopedNotUniversal { looped: usize, missing: usize },
    /// With loops deleted, `a ≁ b`, `b ≁ c` but `a ~ c`: non-adjacency is not
    /// transitive, so the graph is not complete multipartite.
    NotMultipartite { a: usize, b: usize, c: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fertility {
    pub fertile: bool,
    pub witness: Option<FertilityWitness>,
}

/// A connected graph is sterile iff every looped node is adjacent to all
/// other nodes and its loop-deleted version is complete multipartite.
pub fn is_fertile(h: &ConstraintGraph) -> Result<Fertility> {
    if !h.is_connected() {
        return Err(Error::NotConnected);
    }
    let q = h.q();
    let others = |i: usize| h.node_mask() & !(1 << i);
    for i in h.loops() {
        let missing = others(i) & !h.row(i);
        if missing != 0 {
            return Ok(Fertility {
                fertile: true,
                witness: Some(FertilityWitness::LoopedNotUniversal {
                    looped: i,
                    missing: missing.trailing_zeros() as usize,
                }),
            });
        }
    }
    // Non-adjacency among distinct nodes must be transitive.
    let non_adj = |i: usize, j: usize| i != j && !h.adj(i, j);
    for b in 0..q {
        for a in 0..q {
            if !non_adj(a, b) {
                continue;
            }
            for c in 0..q {
                if c != a && non_adj(b, c) && h.adj(a, c) {
                    return Ok(Fertility {
                        fertile: true,
                        witness: Some(FertilityWitness::NotMultipartite { a, b, c }),
                    });
                }
            }
        }
    }
    Ok(Fertility { fertile: false, witness: None })
}
