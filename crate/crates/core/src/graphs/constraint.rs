use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graphs::{Adjacency, MAX_NODES};

/// A finite constraint graph `H`: spins are nodes, permitted neighbouring
/// spin pairs are edges, and loops are allowed.
///
/// Adjacency is kept both as one `u64` bit row per node (for `N(i) ⊆ N(j)`
/// tests and legal-spin masks) and as a sorted edge list.
#[derive(Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    rows: Vec<u64>,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
}

impl ConstraintGraph {
    /// Builds a graph from undirected edges; `(i, i)` is a loop. Duplicate
    /// edges are merged.
    pub fn new(q: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSize("a constraint graph needs q >= 1".into()));
        }
        if q > MAX_NODES {
            return Err(Error::TooManyNodes(q));
        }
        let mut rows = vec![0u64; q];
        for (i, j) in edges {
            for idx in [i, j] {
                if idx >= q {
                    return Err(Error::IndexOutOfRange { index: idx, len: q });
                }
            }
            rows[i] |= 1 << j;
            rows[j] |= 1 << i;
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    /// Builds a graph from bit rows; the rows must already be symmetric.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let q = rows.len();
        if q == 0 {
            return Err(Error::InvalidSize("a constraint graph needs q >= 1".into()));
        }
        if q > MAX_NODES {
            return Err(Error::TooManyNodes(q));
        }
        let mask = full_mask(q);
        for (i, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                return Err(Error::IndexOutOfRange { index: 63 - row.leading_zeros() as usize, len: q });
            }
            for j in bits(row) {
                if rows[j] >> i & 1 == 0 {
                    return Err(Error::Asymmetric(i, j));
                }
            }
        }
        Ok(Self::from_rows_unchecked(rows))
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        let mut edges = Vec::new();
        for (i, &row) in rows.iter().enumerate() {
            for j in bits(row) {
                if j >= i {
                    edges.push((i, j));
                }
            }
        }
        Self { rows, edges, labels: None }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.q() {
            return Err(Error::LengthMismatch { expected: self.q(), got: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn q(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn adj(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Bit row of `N(i)`; bit `i` is set iff `i` is looped.
    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Mask with one bit per node.
    pub fn node_mask(&self) -> u64 {
        full_mask(self.q())
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> {
        bits(self.rows[i])
    }

    pub fn is_looped(&self, i: usize) -> bool {
        self.adj(i, i)
    }

    pub fn loops(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.q()).filter(|&i| self.is_looped(i))
    }

    /// Undirected edges `(i, j)` with `i <= j`, loops included.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self) -> bool {
        !self.edges.is_empty()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Connected (ignoring loops) and non-empty.
    pub fn is_connected(&self) -> bool {
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0;
            for i in bits(frontier) {
                next |= self.rows[i];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == self.node_mask()
    }

    /// Same graph with every node relabelled by `perm` (`i` becomes `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let q = self.q();
        let mut rows = vec![0u64; q];
        for &(i, j) in &self.edges {
            rows[perm[i]] |= 1 << perm[j];
            rows[perm[j]] |= 1 << perm[i];
        }
        let mut g = Self::from_rows_unchecked(rows);
        if let Some(labels) = &self.labels {
            let mut l = vec![String::new(); q];
            for (i, name) in labels.iter().enumerate() {
                l[perm[i]] = name.clone();
            }
            g.labels = Some(l);
        }
        g
    }

    /// Subgraph induced on the nodes in `mask`, re-indexed densely in
    /// increasing order. Returns the graph and the original index of each node.
    pub fn induced(&self, mask: u64) -> (Self, Vec<usize>) {
        let keep: Vec<usize> = bits(mask & self.node_mask()).collect();
        let rows = keep
            .iter()
            .map(|&i| keep.iter().enumerate().filter(|&(_, &j)| self.adj(i, j)).fold(0u64, |acc, (k, _)| acc | 1 << k))
            .collect();
        (Self::from_rows_unchecked(rows), keep)
    }

    /// The same graph with its loops removed.
    pub fn without_loops(&self) -> Self {
        let rows = self.rows.iter().enumerate().map(|(i, &r)| r & !(1 << i)).collect();
        Self::from_rows_unchecked(rows)
    }

    // Standard constructors.

    /// Two adjacent nodes, node 1 looped: node 0 = occupied, node 1 = empty.
    pub fn hard_core() -> Self {
        Self::new(2, [(0, 1), (1, 1)]).unwrap().with_labels(["occupied", "empty"]).unwrap()
    }

    /// Three looped nodes green, yellow, red with edges green-yellow and
    /// yellow-red.
    pub fn hinge() -> Self {
        Self::new(3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap().with_labels(["green", "yellow", "red"]).unwrap()
    }

    pub fn complete(q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSize("K_q needs q >= 1".into()));
        }
        let edges = (0..q).flat_map(|i| (i + 1..q).map(move |j| (i, j)));
        Self::new(q, edges)
    }

    /// Cycle on `k >= 3` nodes, optionally with a loop at every node.
    pub fn cycle(k: usize, looped: bool) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidSize(format!("cycle needs at least 3 nodes, got {k}")));
        }
        let ring = (0..k).map(|i| (i, (i + 1) % k));
        let loops = (0..k).filter(|_| looped).map(|i| (i, i));
        Self::new(k, ring.chain(loops))
    }

    /// Path on `k >= 1` nodes, optionally with a loop at every node.
    pub fn path(k: usize, looped: bool) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSize("path needs at least 1 node".into()));
        }
        let line = (1..k).map(|i| (i - 1, i));
        let loops = (0..k).filter(|_| looped).map(|i| (i, i));
        Self::new(k, line.chain(loops))
    }

    pub fn single_looped_node() -> Self {
        Self::new(1, [(0, 0)]).unwrap()
    }

    /// Builds one of the named graphs.
    pub fn standard(name: &StandardGraph) -> Result<Self> {
        match *name {
            StandardGraph::HardCore => Ok(Self::hard_core()),
            StandardGraph::Hinge => Ok(Self::hinge()),
            StandardGraph::Complete(q) => Self::complete(q),
            StandardGraph::Cycle { k, looped } => Self::cycle(k, looped),
            StandardGraph::Path { k, looped } => Self::path(k, looped),
            StandardGraph::SingleLoopedNode => Ok(Self::single_looped_node()),
        }
    }

    /// True when this graph is the hard-core constraint with node 0 the
    /// unlooped (occupied) spin.
    pub fn is_hard_core(&self) -> bool {
        self.q() == 2 && self.rows == [0b10, 0b11]
    }
}

impl fmt::Debug for ConstraintGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConstraintGraph").field("q", &self.q()).field("edges", &self.edges).finish()
    }
}

impl Adjacency for ConstraintGraph {
    fn node_count(&self) -> usize {
        self.q()
    }

    fn neighbor_list(&self, i: usize) -> Vec<usize> {
        self.neighbors(i).collect()
    }

    fn has_loop(&self, i: usize) -> bool {
        self.is_looped(i)
    }
}

/// Named constraint graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardGraph {
    HardCore,
    Hinge,
    Complete(usize),
    Cycle { k: usize, looped: bool },
    Path { k: usize, looped: bool },
    SingleLoopedNode,
}

impl FromStr for StandardGraph {
    type Err = Error;

    /// Accepts `hard_core`, `hinge`, `loop`, `K3` / `complete:3`,
    /// `cycle:5`, `cycle:4:looped`, `path:3`, `path:3:looped`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let parts: Vec<&str> = lower.split(':').collect();
        let size = |p: Option<&&str>| -> Result<usize> {
            p.ok_or_else(|| Error::InvalidSize(format!("`{s}` needs a size")))?
                .parse::<usize>()
                .map_err(|_| Error::InvalidSize(format!("bad size in `{s}`")))
        };
        let looped = |p: Option<&&str>| -> Result<bool> {
            match p {
                None => Ok(false),
                Some(&"looped") => Ok(true),
                Some(other) => Err(Error::UnknownName(format!("{s} (modifier `{other}`)"))),
            }
        };
        match parts[0] {
            "hard_core" | "hardcore" | "hard-core" if parts.len() == 1 => Ok(Self::HardCore),
            "hinge" | "widom_rowlinson" if parts.len() == 1 => Ok(Self::Hinge),
            "loop" | "single_looped_node" if parts.len() == 1 => Ok(Self::SingleLoopedNode),
            "complete" | "k" => Ok(Self::Complete(size(parts.get(1))?)),
            "cycle" => Ok(Self::Cycle { k: size(parts.get(1))?, looped: looped(parts.get(2))? }),
            "path" => Ok(Self::Path { k: size(parts.get(1))?, looped: looped(parts.get(2))? }),
            other if other.starts_with('k') && parts.len() == 1 => {
                other[1..].parse().map(Self::Complete).map_err(|_| Error::UnknownName(s.to_string()))
            }
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

pub(crate) fn full_mask(q: usize) -> u64 {
    if q >= 64 {
        u64::MAX
    } else {
        (1u64 << q) - 1
    }
}

/// Indices of the set bits of `mask`, in increasing order.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}
