//! Exact small-instance machinery for `hom(G, H)`: enumeration, the flip
//! graph and its connectivity, finite λ-measures, Gibbs checks and exact
//! dynamic programming on tree boards.

mod enumerate;
mod measure;
mod space;
mod tree;

use serde::Serialize;

pub use enumerate::{enumerate_maps, EnumOptions, DEFAULT_SEARCH_CAP};
pub use measure::{
    boundary_influence, check_one_site_gibbs, check_one_site_gibbs_at, lambda_measure, site_marginals, GibbsReport,
};
pub use space::{flip_component, ConnectivityReport, HomSpace, UnionFind};
pub use tree::{count_extensions, feasible_spins, tree_marginal};

use crate::error::{Error, Result};
use crate::graphs::{Board, ConstraintGraph};

/// A spin per site. Whether it is a homomorphism depends on the board and
/// constraint graph it is checked against.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HomMap {
    spins: Vec<u8>,
}

impl HomMap {
    pub fn new(spins: Vec<u8>) -> Self {
        Self { spins }
    }

    pub fn spins(&self) -> &[u8] {
        &self.spins
    }

    pub fn into_spins(self) -> Vec<u8> {
        self.spins
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    /// Copy with `site` set to `spin`.
    pub fn with(&self, site: usize, spin: u8) -> Self {
        let mut spins = self.spins.clone();
        spins[site] = spin;
        Self { spins }
    }

    /// Checks sizes, spin range and every board edge.
    pub fn validate(&self, g: &Board, h: &ConstraintGraph) -> Result<()> {
        if self.spins.len() != g.n_sites() {
            return Err(Error::LengthMismatch { expected: g.n_sites(), got: self.spins.len() });
        }
        if let Some(&c) = self.spins.iter().find(|&&c| c as usize >= h.q()) {
            return Err(Error::IndexOutOfRange { index: c as usize, len: h.q() });
        }
        for &(a, b) in g.edges() {
            let (a, b) = (a as usize, b as usize);
            if !h.adj(self.spins[a] as usize, self.spins[b] as usize) {
                return Err(Error::NotHomomorphism(a, b));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self, g: &Board, h: &ConstraintGraph) -> bool {
        self.validate(g, h).is_ok()
    }

    /// Spins allowed at `site` given its neighbours, as a bitmask.
    pub fn legal_spins(&self, g: &Board, h: &ConstraintGraph, site: usize) -> u64 {
        g.neighbors(site).iter().fold(h.node_mask(), |m, &v| m & h.row(self.spins[v as usize] as usize))
    }

    /// No single-site change gives another homomorphism.
    pub fn is_isolated(&self, g: &Board, h: &ConstraintGraph) -> bool {
        (0..g.n_sites()).all(|s| self.legal_spins(g, h, s) == 1u64 << self.spins[s])
    }
}
