use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, Board, ConstraintGraph};
use crate::homspace::enumerate::EnumOptions;
use crate::homspace::{tree_marginal, HomMap, HomSpace};
use crate::scalar::Scalar;

fn check_lambda<T>(h: &ConstraintGraph, lambda: &[T]) -> Result<()> {
    if lambda.len() != h.q() {
        return Err(Error::LengthMismatch { expected: h.q(), got: lambda.len() });
    }
    Ok(())
}

fn weight<T: Scalar>(map: &HomMap, lambda: &[T]) -> T {
    map.spins().iter().fold(T::one(), |acc, &c| acc * lambda[c as usize].clone())
}

/// The finite λ-measure: each map gets probability proportional to the
/// product of its spins' activities. Indexed like `hs.maps()`.
pub fn lambda_measure<T: Scalar>(hs: &HomSpace, lambda: &[T]) -> Result<Vec<T>> {
    check_lambda(hs.constraint(), lambda)?;
    if hs.is_empty() {
        return Err(Error::EmptySpace);
    }
    let weights: Vec<T> = hs.maps().iter().map(|m| weight(m, lambda)).collect();
    let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
    Ok(weights.into_iter().map(|w| w / total.clone()).collect())
}

/// Per-site spin marginals `[site][spin]` of a measure on `hs`.
pub fn site_marginals<T: Scalar>(hs: &HomSpace, measure: &[T]) -> Vec<Vec<T>> {
    let q = hs.constraint().q();
    let mut out = vec![vec![T::zero(); q]; hs.board().n_sites()];
    for (m, p) in hs.maps().iter().zip(measure) {
        for (s, &c) in m.spins().iter().enumerate() {
            out[s][c as usize] = out[s][c as usize].clone() + p.clone();
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsReport {
    /// Largest `|P(spin | rest) - λ-prediction|` over checked sites.
    pub max_violation: f64,
    /// `(support index, site)` where the largest violation occurs.
    pub worst: Option<(usize, usize)>,
    pub checked: usize,
}

/// One-site Gibbs check at every site. See [`check_one_site_gibbs_at`].
pub fn check_one_site_gibbs<T: Scalar>(
    g: &Board,
    h: &ConstraintGraph,
    lambda: &[T],
    support: &[(HomMap, T)],
) -> Result<GibbsReport> {
    let sites: Vec<usize> = (0..g.n_sites()).collect();
    check_one_site_gibbs_at(g, h, lambda, support, &sites)
}

/// For each map with positive mass and each listed site, compares the law of
/// the site's spin given all other spins (from the measure) with the
/// activities restricted to the spins legal there. Maps missing from
/// `support` have mass zero.
pub fn check_one_site_gibbs_at<T: Scalar>(
    g: &Board,
    h: &ConstraintGraph,
    lambda: &[T],
    support: &[(HomMap, T)],
    sites: &[usize],
) -> Result<GibbsReport> {
    check_lambda(h, lambda)?;
    for (m, _) in support {
        m.validate(g, h)?;
    }
    let mass: HashMap<&[u8], &T> = support.iter().map(|(m, p)| (m.spins(), p)).collect();
    let zero = T::zero();
    let mut report = GibbsReport { max_violation: 0.0, worst: None, checked: 0 };
    let mut buf = Vec::new();
    for (k, (m, p)) in support.iter().enumerate() {
        if !p.is_positive() {
            continue;
        }
        buf.clear();
        buf.extend_from_slice(m.spins());
        for &s in sites {
            let legal: Vec<usize> = bits(m.legal_spins(g, h, s)).collect();
            let own = buf[s];
            let masses: Vec<T> = legal
                .iter()
                .map(|&c| {
                    buf[s] = c as u8;
                    (*mass.get(buf.as_slice()).unwrap_or(&&zero)).clone()
                })
                .collect();
            buf[s] = own;
            let total = masses.iter().cloned().fold(T::zero(), |a, b| a + b);
            let lam_total = legal.iter().fold(T::zero(), |a, &c| a + lambda[c].clone());
            for (i, &c) in legal.iter().enumerate() {
                let observed = masses[i].clone() / total.clone();
                let predicted = lambda[c].clone() / lam_total.clone();
                let v = observed.abs_diff(&predicted).to_f64_lossy();
                if v > report.max_violation {
                    report.max_violation = v;
                    report.worst = Some((k, s));
                }
            }
            report.checked += 1;
        }
    }
    Ok(report)
}

/// Exact law of the spin at `target` under the λ-measure conditioned on the
/// `boundary` spins. Tree boards use leaf-to-root dynamic programming; other
/// boards enumerate the pinned space.
pub fn boundary_influence<T: Scalar>(
    g: &Board,
    h: &ConstraintGraph,
    lambda: &[T],
    boundary: &[(usize, u8)],
    target: usize,
) -> Result<Vec<T>> {
    check_lambda(h, lambda)?;
    if target >= g.n_sites() {
        return Err(Error::IndexOutOfRange { index: target, len: g.n_sites() });
    }
    if g.is_tree() {
        return tree_marginal(g, h, lambda, boundary, target);
    }
    let hs = HomSpace::enumerate_with(g, h, &EnumOptions::pinned(boundary.to_vec()))?;
    if hs.is_empty() {
        return Err(Error::InconsistentBoundary);
    }
    let mu = lambda_measure(&hs, lambda)?;
    Ok(site_marginals(&hs, &mu).swap_remove(target))
}
