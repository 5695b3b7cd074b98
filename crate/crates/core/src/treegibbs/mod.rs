//! Simple (semi-)invariant Gibbs measures on Cayley trees `T^r`, through
//! node-weighted branching random walks and the fundamental equations.

mod check;
mod double;
mod family;
mod frozen;
mod linalg;
mod solver;
mod walk;

pub use check::fundamental_residual;
pub use double::{semi_invariant_from_double, DoubleReport};
pub use family::{
    count_transition, ActivityFamily, CountKind, FamilyPoint, Transition, TransitionOptions, TransitionReport,
};
pub use frozen::{frozen_coloring, long_range_action_probe, DepthProbe, LongRangeReport};
pub use linalg::solve_dense;
pub use solver::{solve_fundamental, GibbsSolution, SolveMode, SolveOptions, SolveReport};
pub use walk::{
    conditional_spin_check, sample_branching_walk, weights_to_activities, BranchingWalk, ConditionalCheck,
    InducedActivities, RootSpin, SiteContext, TreeConfig,
};
