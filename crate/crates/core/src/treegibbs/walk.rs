use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, is_bipartite, ActivityVector, Board, ConstraintGraph, WeightVector};
use crate::homspace::HomMap;
use crate::scalar::Scalar;

/// Node-weighted branching random walk on `h` driving a tree of branching
/// number `r`. A child of a site with spin `i` takes spin `j ~ i` with
/// probability `w_j / z_i`, where `z_i` sums the weights of `i`'s neighbours.
#[derive(Clone, Debug)]
pub struct BranchingWalk<T> {
    h: ConstraintGraph,
    r: usize,
    w: WeightVector<T>,
    z: Vec<T>,
}

/// Activities induced by a weighting: `λ_i = w_i / z_i^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedActivities<T> {
    pub raw: Vec<T>,
    pub normalized: ActivityVector<T>,
}

impl<T: Scalar> BranchingWalk<T> {
    pub fn new(h: &ConstraintGraph, r: usize, w: WeightVector<T>) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSize("branching number r must be >= 1".into()));
        }
        w.expect_len(h.q())?;
        let mut z = Vec::with_capacity(h.q());
        for i in 0..h.q() {
            if h.row(i) == 0 {
                return Err(Error::IsolatedNode(i));
            }
            z.push(bits(h.row(i)).fold(T::zero(), |a, j| a + w[j].clone()));
        }
        Ok(Self { h: h.clone(), r, w, z })
    }

    pub fn constraint(&self) -> &ConstraintGraph {
        &self.h
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn weights(&self) -> &[T] {
        self.w.as_slice()
    }

    pub fn z(&self) -> &[T] {
        &self.z
    }

    /// `p_ij`, zero unless `i ~ j`.
    pub fn transition(&self, i: usize, j: usize) -> T {
        if self.h.adj(i, j) {
            self.w[j].clone() / self.z[i].clone()
        } else {
            T::zero()
        }
    }

    pub fn transition_matrix(&self) -> Vec<Vec<T>> {
        let q = self.h.q();
        (0..q).map(|i| (0..q).map(|j| self.transition(i, j)).collect()).collect()
    }

    /// `π_i ∝ w_i z_i`, normalized.
    pub fn stationary(&self) -> Vec<T> {
        let mass: Vec<T> = self.w.as_slice().iter().zip(&self.z).map(|(w, z)| w.clone() * z.clone()).collect();
        let total = mass.iter().cloned().fold(T::zero(), |a, b| a + b);
        mass.into_iter().map(|m| m / total.clone()).collect()
    }

    pub fn activities(&self) -> InducedActivities<T> {
        let r = self.r as u32;
        let raw: Vec<T> = self.w.as_slice().iter().zip(&self.z).map(|(w, z)| w.clone() / z.powu(r)).collect();
        let normalized = ActivityVector::new(raw.clone()).expect("positive").normalized();
        InducedActivities { raw, normalized }
    }
}

/// `λ_i = w_i / z_i^r`, raw and normalized to sum one.
pub fn weights_to_activities<T: Scalar>(h: &ConstraintGraph, r: usize, w: &[T]) -> Result<InducedActivities<T>> {
    Ok(BranchingWalk::new(h, r, WeightVector::new(w.to_vec())?)?.activities())
}

/// Where the root spin of a tree configuration came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootSpin {
    /// Drawn from the walk's stationary law.
    Sampled,
    /// Chosen by a deterministic construction.
    Constructed,
}

/// A homomorphism from a truncated Cayley tree into `H`.
#[derive(Clone, Debug)]
pub struct TreeConfig {
    pub board: Board,
    pub map: HomMap,
    pub root: RootSpin,
}

fn to_f64_weights<T: Scalar>(v: &[T]) -> Vec<f64> {
    v.iter().map(Scalar::to_f64_lossy).collect()
}

/// Grows a configuration on `tree(r, depth)`: the root spin is drawn from
/// `π`, and each child's spin from the transition row of its parent's spin.
pub fn sample_branching_walk<T: Scalar>(bw: &BranchingWalk<T>, depth: usize, seed: u64) -> Result<TreeConfig> {
    if is_bipartite(&bw.h).is_some() {
        return Err(Error::Bipartite);
    }
    let board = Board::tree(bw.r, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = bw.h.q();
    let pi = WeightedIndex::new(to_f64_weights(&bw.stationary())).map_err(|e| Error::Invalid(e.to_string()))?;
    let rows: Vec<WeightedIndex<f64>> = (0..q)
        .map(|i| {
            let row: Vec<T> = (0..q).map(|j| bw.transition(i, j)).collect();
            WeightedIndex::new(to_f64_weights(&row)).map_err(|e| Error::Invalid(e.to_string()))
        })
        .collect::<Result<_>>()?;
    let mut spins = vec![0u8; board.n_sites()];
    spins[0] = pi.sample(&mut rng) as u8;
    // Sites are numbered level by level, so parents precede children.
    for s in 0..board.n_sites() {
        for c in board.tree_children(s).expect("tree board") {
            spins[c] = rows[spins[s] as usize].sample(&mut rng) as u8;
        }
    }
    Ok(TreeConfig { board, map: HomMap::new(spins), root: RootSpin::Sampled })
}

/// Spins around a single tree site: its parent's spin (absent for the root)
/// and the spins of its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteContext {
    pub parent: Option<u8>,
    pub children: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalCheck<T> {
    /// Law of the site's spin under the branching walk, given the context.
    pub walk: Vec<T>,
    /// Activities restricted to the spins legal in the context, normalized.
    pub gibbs: Vec<T>,
}

impl<T: Scalar> ConditionalCheck<T> {
    pub fn max_difference(&self) -> f64 {
        crate::scalar::max_abs_diff(&self.walk, &self.gibbs)
    }
}

/// Conditional spin law at a site given all its neighbours, from the walk
/// (`p_{parent,s} ∏ p_{s,c}`, or `π_s ∏ p_{s,c}` at the root) and from the
/// one-site Gibbs rule. They agree whenever the context has the right degree
/// (`r` children below the root, `r+1` at the root).
pub fn conditional_spin_check<T: Scalar>(bw: &BranchingWalk<T>, ctx: &SiteContext) -> Result<ConditionalCheck<T>> {
    let q = bw.h.q();
    if let Some(&c) = ctx.parent.iter().chain(&ctx.children).find(|&&c| c as usize >= q) {
        return Err(Error::IndexOutOfRange { index: c as usize, len: q });
    }
    let pi = bw.stationary();
    let walk: Vec<T> = (0..q)
        .map(|s| {
            let head = match ctx.parent {
                Some(p) => bw.transition(p as usize, s),
                None => pi[s].clone(),
            };
            ctx.children.iter().fold(head, |acc, &c| acc * bw.transition(s, c as usize))
        })
        .collect();
    let walk = crate::scalar::normalize(&walk).ok_or(Error::UnrealizableContext)?;
    let lambda = bw.activities().raw;
    let legal = ctx.parent.iter().chain(&ctx.children).fold(bw.h.node_mask(), |m, &c| m & bw.h.row(c as usize));
    let gibbs: Vec<T> = (0..q).map(|s| if legal >> s & 1 == 1 { lambda[s].clone() } else { T::zero() }).collect();
    let gibbs = crate::scalar::normalize(&gibbs).ok_or(Error::UnrealizableContext)?;
    Ok(ConditionalCheck { walk, gibbs })
}
