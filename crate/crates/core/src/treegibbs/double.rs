use serde::Serialize;

use crate::error::Result;
use crate::graphs::{double, ConstraintGraph};
use crate::scalar::Scalar;
use crate::treegibbs::weights_to_activities;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoubleReport<T> {
    /// Activities on `2H` (positive copy first), normalized.
    pub lambda_double: Vec<T>,
    /// `λ_{-i} ∝ λ_i`: the weights give a semi-invariant measure on `H`.
    pub lambda_proportional: bool,
    /// `w_{-i} ∝ w_i`: the measure is in fact invariant.
    pub weights_proportional: bool,
    /// The activities on `H` when `lambda_proportional` holds.
    pub lambda_on_h: Option<Vec<T>>,
}

/// `a ∝ b` by cross-multiplication. `rel_tol = 0` asks for exact equality.
fn proportional<T: Scalar>(a: &[T], b: &[T], rel_tol: f64) -> bool {
    (1..a.len()).all(|i| {
        let lhs = a[i].clone() * b[0].clone();
        let rhs = a[0].clone() * b[i].clone();
        if rel_tol == 0.0 {
            lhs == rhs
        } else {
            let (l, r) = (lhs.to_f64_lossy(), rhs.to_f64_lossy());
            (l - r).abs() <= rel_tol * l.abs().max(r.abs())
        }
    })
}

/// Reads weights `w` on `2H` (`w[i]` on `+i`, `w[q+i]` on `-i`) as a
/// branching walk and reports whether it projects to a semi-invariant
/// measure on `H`.
pub fn semi_invariant_from_double<T: Scalar>(
    h: &ConstraintGraph,
    r: usize,
    w: &[T],
    rel_tol: f64,
) -> Result<DoubleReport<T>> {
    let q = h.q();
    let act = weights_to_activities(&double(h)?, r, w)?;
    let lambda_double = act.normalized.into_inner();
    let (pos, neg) = act.raw.split_at(q);
    let lambda_proportional = proportional(pos, neg, rel_tol);
    let weights_proportional = proportional(&w[..q], &w[q..], rel_tol);
    let lambda_on_h = lambda_proportional.then(|| crate::scalar::normalize(pos).expect("positive"));
    Ok(DoubleReport { lambda_double, lambda_proportional, weights_proportional, lambda_on_h })
}
