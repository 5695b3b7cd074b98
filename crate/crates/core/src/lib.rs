//! Hard-constraint spin models as graph-homomorphism spaces.
//!
//! A constraint graph `H` (loops allowed) lists which spins may sit on
//! adjacent sites of a board `G`; configurations are homomorphisms
//! `G -> H`. The crate covers:
//!
//! * [`graphs`]: constraint graphs, boards, weak squares, bipartite doubles,
//!   JSON and DOT I/O.
//! * [`classify`]: folds and dismantlability, the cop-and-robber game, and
//!   the fertile/sterile test.
//! * [`homspace`]: exact enumeration of `hom(G, H)`, flip-graph
//!   connectivity, finite λ-measures and Gibbs checks.
//! * [`treegibbs`]: node-weighted branching random walks on Cayley trees and
//!   a multi-start solver for the fundamental equations.
//! * [`mcmc`]: the single-site heat-bath chain on finite boards and
//!   phase-coexistence statistics.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix the two
//! scalars used in practice.

pub mod classify;
pub mod error;
pub mod graphs;
pub mod homspace;
pub mod mcmc;
pub mod scalar;
pub mod treegibbs;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type Weights = graphs::WeightVector<f64>;
pub type ExactWeights = graphs::WeightVector<Rational>;
pub type Activities = graphs::ActivityVector<f64>;
pub type ExactActivities = graphs::ActivityVector<Rational>;
pub type Walk = treegibbs::BranchingWalk<f64>;
pub type ExactWalk = treegibbs::BranchingWalk<Rational>;
