use std::collections::VecDeque;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::graphs::Adjacency;

/// Default cap on the number of sites a board constructor may produce.
pub const DEFAULT_SITE_CAP: usize = 10_000_000;

/// Geometric or structural metadata carried by constructed boards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoardMeta {
    None,
    /// `(2n+1)^d` box centred on the origin; sites in lexicographic order
    /// of their coordinates.
    Grid {
        n: usize,
        d: usize,
    },
    /// Rooted truncation of the `r`-branching Cayley tree, sites in BFS
    /// order with the root at index 0.
    Tree {
        r: usize,
        depth: usize,
        parent: Vec<Option<u32>>,
        level: Vec<u32>,
    },
    /// Weak square of a `q`-node constraint graph; site `a*q + b` is the
    /// pair `(a, b)`.
    WeakSquare {
        q: usize,
    },
}

/// A finite loopless board `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    adj: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    meta: BoardMeta,
}

impl Board {
    /// Builds a board from undirected edges. Loops are rejected; repeated
    /// edges are merged.
    pub fn new(n_sites: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n_sites];
        for (a, b) in edges {
            for idx in [a, b] {
                if idx >= n_sites {
                    return Err(Error::IndexOutOfRange { index: idx, len: n_sites });
                }
            }
            if a == b {
                return Err(Error::BoardLoop(a));
            }
            adj[a].push(b as u32);
            adj[b].push(a as u32);
        }
        Ok(Self::from_adj(adj, BoardMeta::None))
    }

    fn from_adj(mut adj: Vec<Vec<u32>>, meta: BoardMeta) -> Self {
        let mut edges = Vec::new();
        for (a, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            edges.extend(list.iter().filter(|&&b| b as usize > a).map(|&b| (a as u32, b)));
        }
        Self { adj, edges, meta }
    }

    pub(crate) fn with_meta(mut self, meta: BoardMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, site: usize) -> &[u32] {
        &self.adj[site]
    }

    pub fn degree(&self, site: usize) -> usize {
        self.adj[site].len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn adj(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn meta(&self) -> &BoardMeta {
        &self.meta
    }

    /// `(2n+1)^d` grid box with nearest-neighbour bonds, `d ∈ {1,2,3}`.
    pub fn grid_box(n: usize, d: usize) -> Result<Self> {
        Self::grid_box_capped(n, d, DEFAULT_SITE_CAP)
    }

    pub fn grid_box_capped(n: usize, d: usize, cap: usize) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(Error::InvalidSize(format!("grid dimension must be 1, 2 or 3, got {d}")));
        }
        let side = 2 * n as u128 + 1;
        let sites = side.pow(d as u32);
        check_cap(sites, cap)?;
        let side = side as usize;
        let sites = sites as usize;
        let mut adj = vec![Vec::new(); sites];
        let stride: Vec<usize> = (0..d).map(|k| side.pow((d - 1 - k) as u32)).collect();
        for (s, list) in adj.iter_mut().enumerate() {
            for &st in &stride {
                let coord = s / st % side;
                if coord > 0 {
                    list.push((s - st) as u32);
                }
                if coord + 1 < side {
                    list.push((s + st) as u32);
                }
            }
        }
        Ok(Self::from_adj(adj, BoardMeta::Grid { n, d }))
    }

    /// Rooted truncation of `T^r`: the root has `r+1` children, every other
    /// internal site has `r`, and all sites lie within `depth` of the root.
    pub fn tree(r: usize, depth: usize) -> Result<Self> {
        Self::tree_capped(r, depth, DEFAULT_SITE_CAP)
    }

    pub fn tree_capped(r: usize, depth: usize, cap: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSize("tree branching r must be >= 1".into()));
        }
        check_cap(tree_site_count(r, depth), cap)?;
        let mut parent = vec![None];
        let mut level = vec![0u32];
        let mut adj: Vec<Vec<u32>> = vec![Vec::new()];
        let mut frontier = vec![0u32];
        for lvl in 1..=depth {
            let mut next = Vec::new();
            for &p in &frontier {
                let kids = if p == 0 { r + 1 } else { r };
                for _ in 0..kids {
                    let c = adj.len() as u32;
                    adj.push(vec![p]);
                    adj[p as usize].push(c);
                    parent.push(Some(p));
                    level.push(lvl as u32);
                    next.push(c);
                }
            }
            frontier = next;
        }
        Ok(Self::from_adj(adj, BoardMeta::Tree { r, depth, parent, level }))
    }

    /// Path with `len` sites.
    pub fn path(len: usize) -> Result<Self> {
        Self::new(len, (1..len).map(|i| (i - 1, i)))
    }

    /// Complete board `K_k`.
    pub fn complete(k: usize) -> Result<Self> {
        Self::new(k, (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))))
    }

    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidSize(format!("cycle board needs at least 3 sites, got {k}")));
        }
        Self::new(k, (0..k).map(|i| (i, (i + 1) % k)))
    }

    /// Builds a board from a [`BoardSpec`].
    pub fn build(spec: &BoardSpec, cap: usize) -> Result<Self> {
        match spec {
            BoardSpec::GridBox { n, d } => Self::grid_box_capped(*n, *d, cap),
            BoardSpec::Tree { r, depth } => Self::tree_capped(*r, *depth, cap),
            BoardSpec::Path(len) => {
                check_cap(*len as u128, cap)?;
                Self::path(*len)
            }
            BoardSpec::Complete(k) => {
                check_cap(*k as u128, cap)?;
                Self::complete(*k)
            }
            BoardSpec::FromFile(path) => {
                let b = crate::graphs::io::load_board(path)?;
                check_cap(b.n_sites() as u128, cap)?;
                Ok(b)
            }
        }
    }

    /// Grid coordinates of `site` (only for grid boxes).
    pub fn grid_coords(&self, site: usize) -> Option<Vec<i64>> {
        match self.meta {
            BoardMeta::Grid { n, d } => {
                let side = 2 * n + 1;
                let mut rest = site;
                let mut c = vec![0i64; d];
                for k in (0..d).rev() {
                    c[k] = (rest % side) as i64 - n as i64;
                    rest /= side;
                }
                Some(c)
            }
            _ => None,
        }
    }

    /// Parity class of every site: for grids the coordinate-sum parity (the
    /// origin is even), for trees the depth parity, otherwise a BFS
    /// 2-colouring with the lowest site of each component even. `None` if
    /// the board is not bipartite.
    pub fn parity(&self) -> Option<Vec<bool>> {
        match &self.meta {
            BoardMeta::Grid { .. } => Some(
                (0..self.n_sites())
                    .map(|s| self.grid_coords(s).unwrap().iter().sum::<i64>().rem_euclid(2) == 1)
                    .collect(),
            ),
            BoardMeta::Tree { level, .. } => Some(level.iter().map(|l| l % 2 == 1).collect()),
            _ => crate::graphs::is_bipartite(self),
        }
    }

    /// Sites in BFS order from `start`, then any other components in index
    /// order.
    pub fn bfs_order(&self, start: usize) -> Vec<usize> {
        let n = self.n_sites();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        for s in std::iter::once(start).chain(0..n) {
            if s >= n || seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                order.push(u);
                for &v in &self.adj[u] {
                    if !seen[v as usize] {
                        seen[v as usize] = true;
                        queue.push_back(v as usize);
                    }
                }
            }
        }
        order
    }

    /// True when the board is connected and acyclic.
    pub fn is_tree(&self) -> bool {
        self.n_sites() > 0 && self.edges.len() + 1 == self.n_sites() && self.bfs_component_size(0) == self.n_sites()
    }

    fn bfs_component_size(&self, start: usize) -> usize {
        let mut seen = vec![false; self.n_sites()];
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 0;
        while let Some(u) = stack.pop() {
            count += 1;
            for &v in &self.adj[u] {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    stack.push(v as usize);
                }
            }
        }
        count
    }

    /// Sites at distance exactly `level` from the root (tree boards only).
    pub fn tree_level(&self, lvl: usize) -> Option<Vec<usize>> {
        match &self.meta {
            BoardMeta::Tree { level, .. } => {
                Some(level.iter().enumerate().filter(|&(_, &l)| l as usize == lvl).map(|(s, _)| s).collect())
            }
            _ => None,
        }
    }

    /// Children of `site` in a tree board.
    pub fn tree_children(&self, site: usize) -> Option<Vec<usize>> {
        match &self.meta {
            BoardMeta::Tree { parent, .. } => {
                Some(self.adj[site].iter().map(|&v| v as usize).filter(|&v| parent[v] == Some(site as u32)).collect())
            }
            _ => None,
        }
    }
}

impl Adjacency for Board {
    fn node_count(&self) -> usize {
        self.n_sites()
    }

    fn neighbor_list(&self, i: usize) -> Vec<usize> {
        self.adj[i].iter().map(|&v| v as usize).collect()
    }

    fn has_loop(&self, _i: usize) -> bool {
        false
    }
}

/// Board constructors addressable from configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoardSpec {
    GridBox { n: usize, d: usize },
    Tree { r: usize, depth: usize },
    Path(usize),
    Complete(usize),
    FromFile(PathBuf),
}

impl std::str::FromStr for BoardSpec {
    type Err = Error;

    /// `grid:N:D`, `tree:R:DEPTH`, `path:LEN`, `complete:K`, or a path to a
    /// JSON board file.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts
                .get(i)
                .ok_or_else(|| Error::InvalidSize(format!("`{s}` is missing a size")))?
                .parse()
                .map_err(|_| Error::InvalidSize(format!("bad size in `{s}`")))
        };
        match parts[0] {
            "grid" | "grid_box" => Ok(Self::GridBox { n: num(1)?, d: parts.get(2).map_or(Ok(2), |_| num(2))? }),
            "tree" => Ok(Self::Tree { r: num(1)?, depth: num(2)? }),
            "path" => Ok(Self::Path(num(1)?)),
            "complete" | "k" | "K" => Ok(Self::Complete(num(1)?)),
            _ if s.ends_with(".json") => Ok(Self::FromFile(PathBuf::from(s))),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

/// `1 + (r+1)(r^depth - 1)/(r - 1)` for `r >= 2`, `2·depth + 1` for `r = 1`.
pub fn tree_site_count(r: usize, depth: usize) -> u128 {
    let r = r as u128;
    if r == 1 {
        return 2 * depth as u128 + 1;
    }
    // Saturate instead of overflowing; the cap check rejects anything huge.
    let mut total: u128 = 1;
    let mut layer: u128 = r + 1;
    for _ in 0..depth {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(r);
    }
    total
}

fn check_cap(sites: u128, cap: usize) -> Result<()> {
    if sites > cap as u128 {
        Err(Error::SiteCap { sites, cap })
    } else {
        Ok(())
    }
}
