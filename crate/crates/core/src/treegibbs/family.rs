use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::ConstraintGraph;
use crate::treegibbs::solver::{solve_fundamental, SolveOptions};

/// One-parameter activity family `λ_i(t) = base_i · t^{exponent_i}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActivityFamily {
    pub base: Vec<f64>,
    pub exponent: Vec<f64>,
}

impl ActivityFamily {
    pub fn new(base: Vec<f64>, exponent: Vec<f64>) -> Result<Self> {
        if base.len() != exponent.len() {
            return Err(Error::LengthMismatch { expected: base.len(), got: exponent.len() });
        }
        if let Some(i) = base.iter().position(|&b| !(b > 0.0)) {
            return Err(Error::NonPositive(i));
        }
        Ok(Self { base, exponent })
    }

    /// Hinge `(t, 1, t)`: green and red share activity `t`.
    pub fn hinge() -> Self {
        Self { base: vec![1.0; 3], exponent: vec![1.0, 0.0, 1.0] }
    }

    /// Hard-core `(t, 1)`: occupied activity `t`.
    pub fn hard_core() -> Self {
        Self { base: vec![1.0; 2], exponent: vec![1.0, 0.0] }
    }

    /// Scales the first node: `(t, 1, ..., 1)`.
    pub fn first_node(q: usize) -> Self {
        let mut exponent = vec![0.0; q];
        exponent[0] = 1.0;
        Self { base: vec![1.0; q], exponent }
    }

    pub fn at(&self, t: f64) -> Vec<f64> {
        self.base.iter().zip(&self.exponent).map(|(b, e)| b * t.powf(*e)).collect()
    }
}

/// Which solution count the sweep tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountKind {
    Invariant,
    Classes,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyPoint {
    pub t: f64,
    pub invariant_count: usize,
    pub class_count: usize,
}

/// A bracket `[lo, hi]` across which the tracked count changes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transition {
    pub lo: f64,
    pub hi: f64,
    pub count_lo: usize,
    pub count_hi: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionReport {
    pub points: Vec<FamilyPoint>,
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransitionOptions {
    pub solve: SolveOptions,
    pub count: CountKind,
    /// Width at which bisection stops.
    pub bisect_tol: f64,
}

impl Default for TransitionOptions {
    fn default() -> Self {
        Self { solve: SolveOptions::default(), count: CountKind::Invariant, bisect_tol: 1e-6 }
    }
}

fn point(h: &ConstraintGraph, r: usize, family: &ActivityFamily, t: f64, opts: &SolveOptions) -> Result<FamilyPoint> {
    let rep = solve_fundamental(h, r, &family.at(t), opts)?;
    Ok(FamilyPoint { t, invariant_count: rep.invariant_count(), class_count: rep.class_count() })
}

/// Solves along `grid` (increasing `t` values) and bisects every interval
/// where the tracked count changes.
pub fn count_transition(
    h: &ConstraintGraph,
    r: usize,
    family: &ActivityFamily,
    grid: &[f64],
    opts: &TransitionOptions,
) -> Result<TransitionReport> {
    if family.base.len() != h.q() {
        return Err(Error::LengthMismatch { expected: h.q(), got: family.base.len() });
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Invalid("grid must be positive and increasing".into()));
    }
    let pick = |p: &FamilyPoint| match opts.count {
        CountKind::Invariant => p.invariant_count,
        CountKind::Classes => p.class_count,
    };
    let points = grid.iter().map(|&t| point(h, r, family, t, &opts.solve)).collect::<Result<Vec<_>>>()?;
    let mut transitions = Vec::new();
    for w in points.windows(2) {
        let (mut lo, mut hi) = (w[0].t, w[1].t);
        let (count_lo, count_hi) = (pick(&w[0]), pick(&w[1]));
        if count_lo == count_hi {
            continue;
        }
        while hi - lo > opts.bisect_tol {
            let mid = 0.5 * (lo + hi);
            if pick(&point(h, r, family, mid, &opts.solve)?) == count_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        transitions.push(Transition { lo, hi, count_lo, count_hi });
    }
    Ok(TransitionReport { points, transitions })
}
