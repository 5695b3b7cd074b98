//! Multi-start solver for the fundamental equations
//!
//! ```text
//! λ_i = u_i / (Σ_{j~i} v_j)^r = v_i / (Σ_{j~i} u_j)^r
//! ```
//!
//! Unknowns are logarithms `x = ln u`, `y = ln v`. Because `λ` only matters
//! up to scale, each family of equations gets its own free log-constant and
//! the gauge is fixed by `Σx = Σy = 0`:
//!
//! ```text
//! F_i = x_i - r·LSE_{j~i}(y) - ln λ̂_i - c1
//! G_i = y_i - r·LSE_{j~i}(x) - ln λ̂_i - c2
//! ```
//!
//! Starts are relaxed by alternating fixed-point sweeps (odd starts only)
//! and then by damped Newton. Converged points are rescaled so `c1 = c2`,
//! normalized to `Σ(u+v) = 2`, re-verified with [`fundamental_residual`],
//! and clustered. Bipartite `H` is solved for invariant solutions only;
//! its semi-invariant solutions come in parity phases (one per component of
//! `2H`).

use itertools::Itertools;
use num_traits::NumCast;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{bits, is_bipartite, ConstraintGraph};
use crate::homspace::UnionFind;
use crate::scalar::Real;
use crate::treegibbs::check::fundamental_residual;
use crate::treegibbs::linalg::solve_dense;

fn k<R: Real>(x: f64) -> R {
    <R as NumCast>::from(x).expect("representable constant")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    pub starts: usize,
    /// Acceptance threshold for the re-verified residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Base clustering radius in normalized `(u, v)` coordinates.
    pub dedup_tol: f64,
    pub seed: u64,
    /// Fixed-point sweeps applied to odd-numbered starts before Newton.
    pub fixed_point_sweeps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { starts: 200, tol: 1e-10, max_iter: 200, dedup_tol: 1e-6, seed: 0, fixed_point_sweeps: 25 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// General `(u, v)` unknowns.
    SemiInvariant,
    /// `u = v` imposed; used for bipartite `H`.
    InvariantOnly,
}

/// One simple semi-invariant Gibbs measure, as a solution class.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsSolution<R> {
    pub u: Vec<R>,
    pub v: Vec<R>,
    pub r: usize,
    /// Activities induced by `u` (normalized to sum one).
    pub lambda_out: Vec<R>,
    pub invariant: bool,
    /// True when `(u, v)` and `(v, u)` are distinct mirror solutions.
    pub chiral: bool,
    pub residual: f64,
    /// Size of the last Newton steps, a bound on the numerical error.
    pub error_estimate: f64,
    /// Number of starts that converged into this class.
    pub hits: usize,
}

impl<R: Real> GibbsSolution<R> {
    /// Weights on `2H`: `u` on the positive copy, `v` on the negative one.
    pub fn double_weights(&self) -> Vec<R> {
        self.u.iter().chain(&self.v).copied().collect()
    }

    /// `u` scaled to sum one.
    pub fn profile(&self) -> Vec<R> {
        let s = self.u.iter().fold(R::zero(), |a, &b| a + b);
        self.u.iter().map(|&x| x / s).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport<R> {
    pub mode: SolveMode,
    pub solutions: Vec<GibbsSolution<R>>,
    /// Parity phases per class (2 for bipartite `H`, else 1).
    pub phases: usize,
    pub starts: usize,
    pub converged: usize,
    /// Classes after merging images under λ-preserving automorphisms of `H`
    /// (computed for `q <= 8`).
    pub symmetry_reduced: Option<usize>,
}

impl<R: Real> SolveReport<R> {
    pub fn class_count(&self) -> usize {
        self.solutions.len()
    }

    pub fn invariant_count(&self) -> usize {
        self.solutions.iter().filter(|s| s.invariant).count()
    }

    /// Distinct simple semi-invariant measures, counting parity phases.
    pub fn semi_invariant_count(&self) -> usize {
        self.class_count() * self.phases
    }

    pub fn invariant_solutions(&self) -> impl Iterator<Item = &GibbsSolution<R>> {
        self.solutions.iter().filter(|s| s.invariant)
    }
}

/// The log-coordinate system for one `(H, r, λ)`.
struct System<R> {
    nbrs: Vec<Vec<usize>>,
    r: R,
    ell: Vec<R>,
    mode: SolveMode,
}

/// `LSE` over `idx` of `z[offset + j]`, plus the softmax weights.
fn lse<R: Real>(z: &[R], offset: usize, idx: &[usize], weights: &mut Vec<R>) -> R {
    let m = idx.iter().map(|&j| z[offset + j]).fold(R::neg_infinity(), R::max);
    weights.clear();
    let mut s = R::zero();
    for &j in idx {
        let e = (z[offset + j] - m).exp();
        weights.push(e);
        s = s + e;
    }
    for w in weights.iter_mut() {
        *w = *w / s;
    }
    m + s.ln()
}

impl<R: Real> System<R> {
    fn q(&self) -> usize {
        self.ell.len()
    }

    fn dim(&self) -> usize {
        match self.mode {
            SolveMode::SemiInvariant => 2 * self.q() + 2,
            SolveMode::InvariantOnly => self.q() + 1,
        }
    }

    /// Offset of the `v` block (the `u` block itself when invariant).
    fn y_off(&self) -> usize {
        match self.mode {
            SolveMode::SemiInvariant => self.q(),
            SolveMode::InvariantOnly => 0,
        }
    }

    fn blocks(&self) -> Vec<(usize, usize, usize)> {
        // (own offset, partner offset, constant index)
        let q = self.q();
        match self.mode {
            SolveMode::SemiInvariant => vec![(0, q, 2 * q), (q, 0, 2 * q + 1)],
            SolveMode::InvariantOnly => vec![(0, 0, q)],
        }
    }

    fn residual(&self, z: &[R]) -> Vec<R> {
        let q = self.q();
        let mut f = vec![R::zero(); self.dim()];
        let mut w = Vec::new();
        for (b, &(own, partner, c)) in self.blocks().iter().enumerate() {
            for i in 0..q {
                f[b * q + i] = z[own + i] - self.r * lse(z, partner, &self.nbrs[i], &mut w) - self.ell[i] - z[c];
            }
        }
        let nb = self.blocks().len();
        for (b, &(own, _, _)) in self.blocks().iter().enumerate() {
            f[nb * q + b] = (0..q).fold(R::zero(), |a, i| a + z[own + i]);
        }
        f
    }

    fn jacobian(&self, z: &[R]) -> Vec<R> {
        let q = self.q();
        let n = self.dim();
        let mut jac = vec![R::zero(); n * n];
        let mut w = Vec::new();
        let nb = self.blocks().len();
        for (b, &(own, partner, c)) in self.blocks().iter().enumerate() {
            for i in 0..q {
                let row = b * q + i;
                jac[row * n + own + i] = jac[row * n + own + i] + R::one();
                lse(z, partner, &self.nbrs[i], &mut w);
                for (&j, &wj) in self.nbrs[i].iter().zip(&w) {
                    jac[row * n + partner + j] = jac[row * n + partner + j] - self.r * wj;
                }
                jac[row * n + c] = -R::one();
            }
            for i in 0..q {
                jac[(nb * q + b) * n + own + i] = R::one();
            }
        }
        jac
    }

    /// Alternating sweeps `x ← ℓ + r·LSE(y)`, `y ← ℓ + r·LSE(x)`, centred.
    fn sweep(&self, z: &mut [R]) {
        let q = self.q();
        let mut w = Vec::new();
        for &(own, partner, _) in &self.blocks() {
            let new: Vec<R> = (0..q).map(|i| self.ell[i] + self.r * lse(z, partner, &self.nbrs[i], &mut w)).collect();
            let mean = new.iter().fold(R::zero(), |a, &b| a + b) / k::<R>(q as f64);
            for i in 0..q {
                z[own + i] = new[i] - mean;
            }
        }
    }

    /// Sets the free constants to their least-squares values.
    fn fit_constants(&self, z: &mut [R]) {
        let q = self.q();
        let mut w = Vec::new();
        for &(own, partner, c) in &self.blocks() {
            let mut s = R::zero();
            for i in 0..q {
                s = s + z[own + i] - self.r * lse(z, partner, &self.nbrs[i], &mut w) - self.ell[i];
            }
            z[c] = s / k::<R>(q as f64);
        }
    }
}

fn norm_inf<R: Real>(v: &[R]) -> R {
    v.iter().fold(R::zero(), |a, &b| a.max(b.abs()))
}

struct Converged<R> {
    z: Vec<R>,
    error_estimate: f64,
}

fn newton<R: Real>(sys: &System<R>, z: Vec<R>, max_iter: usize) -> Option<Converged<R>> {
    let limit = k::<R>(60.0);
    let step_floor = k::<R>(1e-14);
    // Below this residual, full steps are taken regardless of the merit
    // function. Damping crawls along curved valleys near singular roots,
    // where plain Newton still converges.
    let near = R::epsilon().sqrt().max(k(1e-6));
    let f0 = sys.residual(&z);
    let mut cur = (z, f0.clone(), norm_inf(&f0));
    let mut best = cur.clone();
    let mut stale = 0;
    for _ in 0..max_iter {
        let (z, f, fnorm) = &cur;
        let rhs: Vec<R> = f.iter().map(|&x| -x).collect();
        let Some(delta) = solve_dense(sys.jacobian(z), rhs) else {
            break;
        };
        let mut t = R::one();
        let mut accepted = None;
        while t > k(1e-10) {
            let trial: Vec<R> = z.iter().zip(&delta).map(|(&a, &d)| a + t * d).collect();
            let ft = sys.residual(&trial);
            let nt = norm_inf(&ft);
            if nt.is_finite() && (*fnorm < near && nt < near || nt <= (R::one() - k::<R>(1e-4) * t) * *fnorm) {
                accepted = Some((trial, ft, nt));
                break;
            }
            t = t * k(0.5);
        }
        let Some(next) = accepted else {
            break;
        };
        let step = t * norm_inf(&delta);
        cur = next;
        if norm_inf(&cur.0) > limit {
            return None;
        }
        if cur.2 < best.2 {
            best = cur.clone();
            stale = 0;
        } else {
            stale += 1;
            if stale >= 8 {
                break;
            }
        }
        if step < step_floor * (R::one() + norm_inf(&cur.0)) {
            break;
        }
    }
    let (z, f, _) = best;
    // First-order distance to the root: the Newton correction at the final
    // point. Large near degenerate roots, where the residual stalls.
    let rhs: Vec<R> = f.iter().map(|&x| -x).collect();
    let err = match solve_dense(sys.jacobian(&z), rhs) {
        Some(d) => norm_inf(&d),
        None => R::epsilon().cbrt(),
    };
    Some(Converged { z, error_estimate: err.to_f64().unwrap_or(f64::INFINITY) })
}

/// A converged point in solution coordinates.
struct Candidate<R> {
    u: Vec<R>,
    v: Vec<R>,
    residual: f64,
    error_estimate: f64,
}

fn to_candidate<R: Real>(
    sys: &System<R>,
    h: &ConstraintGraph,
    r: usize,
    lambda: &[R],
    c: Converged<R>,
) -> Candidate<R> {
    let q = sys.q();
    let z = c.z;
    let (x, y): (Vec<R>, Vec<R>) = match sys.mode {
        SolveMode::InvariantOnly => (z[..q].to_vec(), z[..q].to_vec()),
        SolveMode::SemiInvariant => {
            let shift = (z[2 * q + 1] - z[2 * q]) / (sys.r + R::one());
            (z[..q].iter().map(|&a| a + shift).collect(), z[q..2 * q].to_vec())
        }
    };
    let mut u: Vec<R> = x.iter().map(|a| a.exp()).collect();
    let mut v: Vec<R> = y.iter().map(|a| a.exp()).collect();
    let total = u.iter().chain(&v).fold(R::zero(), |a, &b| a + b);
    let s = k::<R>(2.0) / total;
    u.iter_mut().chain(v.iter_mut()).for_each(|a| *a = *a * s);
    let residual = fundamental_residual(h, r, lambda, &u, &v);
    Candidate { u, v, residual, error_estimate: c.error_estimate }
}

fn max_diff<R: Real>(x: &[R], y: &[R]) -> f64 {
    x.iter().zip(y).map(|(&p, &q)| (p - q).abs().to_f64().unwrap()).fold(0.0, f64::max)
}

fn midpoint<R: Real>(x: &[R], y: &[R]) -> Vec<R> {
    x.iter().zip(y).map(|(&a, &b)| (a + b) / k(2.0)).collect()
}

/// Whether `(au, av)` and `(bu, bv)` are the same root up to the
/// `u <-> v` swap. Close pairs count as one root when their midpoint solves
/// the equations too; between distinct roots the midpoint residual grows
/// with the square of their separation. Pairs within ten times their
/// error estimates also merge. Both keep noisy copies of a degenerate root
/// together.
struct Merge<'a, R> {
    h: &'a ConstraintGraph,
    r: usize,
    lam_hat: &'a [R],
    dedup_tol: f64,
    tol: f64,
}

impl<R: Real> Merge<'_, R> {
    fn same(&self, a: (&[R], &[R]), b: (&[R], &[R]), err: f64) -> bool {
        let straight = max_diff(a.0, b.0).max(max_diff(a.1, b.1));
        let swapped = max_diff(a.0, b.1).max(max_diff(a.1, b.0));
        if straight <= swapped {
            self.aligned(a, b, err)
        } else {
            self.aligned(a, (b.1, b.0), err)
        }
    }

    /// As `same`, without trying the swap. `err` is the summed error
    /// estimate of both points.
    fn aligned(&self, a: (&[R], &[R]), b: (&[R], &[R]), err: f64) -> bool {
        let d = max_diff(a.0, b.0).max(max_diff(a.1, b.1));
        let cap = self.dedup_tol.sqrt();
        if d <= self.dedup_tol + (10.0 * err).min(cap) {
            return true;
        }
        d <= cap
            && fundamental_residual(self.h, self.r, self.lam_hat, &midpoint(a.0, b.0), &midpoint(a.1, b.1)) < self.tol
    }
}

fn initial_point<R: Real>(sys: &System<R>, start: usize, seed: u64) -> Vec<R> {
    let q = sys.q();
    let n = sys.dim();
    let mut z = vec![R::zero(); n];
    match start {
        0 => {}
        1 => {
            let mean = sys.ell.iter().fold(R::zero(), |a, &b| a + b) / k::<R>(q as f64);
            for i in 0..q {
                z[i] = sys.ell[i] - mean;
                z[sys.y_off() + i] = sys.ell[i] - mean;
            }
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(start as u64);
            let ln10 = std::f64::consts::LN_10;
            let blocks = if sys.mode == SolveMode::SemiInvariant { 2 } else { 1 };
            for b in 0..blocks {
                let vals: Vec<f64> = (0..q).map(|_| ln10 * rng.random_range(-3.0..=3.0)).collect();
                let mean = vals.iter().sum::<f64>() / q as f64;
                for i in 0..q {
                    z[b * q + i] = k(vals[i] - mean);
                }
            }
        }
    }
    z
}

/// λ-preserving automorphisms of `h` (identity excluded), for `q <= 8`.
fn lambda_automorphisms(h: &ConstraintGraph, lambda: &[f64]) -> Option<Vec<Vec<usize>>> {
    let q = h.q();
    if q > 8 {
        return None;
    }
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
    Some(
        (0..q)
            .permutations(q)
            .filter(|p| p.iter().enumerate().any(|(i, &j)| i != j))
            .filter(|p| (0..q).all(|i| close(lambda[p[i]], lambda[i])))
            .filter(|p| (0..q).all(|i| bits(h.row(i)).count() == bits(h.row(p[i])).count()))
            .filter(|p| (0..q).all(|i| (0..q).all(|j| h.adj(i, j) == h.adj(p[i], p[j]))))
            .collect(),
    )
}

/// Finds simple semi-invariant Gibbs measures on `T^r` for `(h, λ)`.
/// Counts are "distinct solutions found from all starts", not proofs.
pub fn solve_fundamental<R: Real>(
    h: &ConstraintGraph,
    r: usize,
    lambda: &[R],
    opts: &SolveOptions,
) -> Result<SolveReport<R>> {
    let q = h.q();
    if r == 0 {
        return Err(Error::InvalidSize("branching number r must be >= 1".into()));
    }
    if lambda.len() != q {
        return Err(Error::LengthMismatch { expected: q, got: lambda.len() });
    }
    if let Some(i) = lambda.iter().position(|&l| !(l > R::zero()) || !l.is_finite()) {
        return Err(Error::NonPositive(i));
    }
    if !h.is_connected() {
        return Err(Error::NotConnected);
    }
    if let Some(i) = (0..q).find(|&i| h.row(i) == 0) {
        return Err(Error::IsolatedNode(i));
    }
    let total = lambda.iter().fold(R::zero(), |a, &b| a + b);
    let lam_hat: Vec<R> = lambda.iter().map(|&l| l / total).collect();
    let bipartite = is_bipartite(h).is_some();
    let mode = if bipartite { SolveMode::InvariantOnly } else { SolveMode::SemiInvariant };
    let sys = System {
        nbrs: (0..q).map(|i| bits(h.row(i)).collect()).collect(),
        r: k(r as f64),
        ell: lam_hat.iter().map(|l| l.ln()).collect(),
        mode,
    };

    let candidates: Vec<Option<Candidate<R>>> = (0..opts.starts)
        .into_par_iter()
        .map(|start| {
            let mut z = initial_point(&sys, start, opts.seed);
            if start % 2 == 1 {
                for _ in 0..opts.fixed_point_sweeps {
                    sys.sweep(&mut z);
                }
            }
            sys.fit_constants(&mut z);
            let conv = newton(&sys, z, opts.max_iter)?;
            let cand = to_candidate(&sys, h, r, &lam_hat, conv);
            (cand.residual < opts.tol).then_some(cand)
        })
        .collect();
    let found: Vec<Candidate<R>> = candidates.into_iter().flatten().collect();
    if found.is_empty() {
        return Err(Error::NoSolution(opts.starts));
    }
    let converged = found.len();

    // Single-linkage clustering, merged in start order.
    let merge = Merge { h, r, lam_hat: &lam_hat, dedup_tol: opts.dedup_tol, tol: opts.tol };
    let mut uf = UnionFind::new(found.len());
    for i in 0..found.len() {
        for j in 0..i {
            if merge.same(
                (&found[i].u, &found[i].v),
                (&found[j].u, &found[j].v),
                found[i].error_estimate + found[j].error_estimate,
            ) {
                uf.union(i, j);
            }
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut root_of = std::collections::HashMap::new();
    for i in 0..found.len() {
        let root = uf.find(i);
        let slot = *root_of.entry(root).or_insert_with(|| {
            clusters.push(Vec::new());
            clusters.len() - 1
        });
        clusters[slot].push(i);
    }

    let mut solutions: Vec<GibbsSolution<R>> = clusters
        .iter()
        .map(|members| {
            let best = *members
                .iter()
                .min_by(|&&a, &&b| {
                    (found[a].error_estimate, found[a].residual)
                        .partial_cmp(&(found[b].error_estimate, found[b].residual))
                        .unwrap()
                })
                .unwrap();
            let c = &found[best];
            // Invariant when the candidate and its mirror image are one root.
            let invariant =
                mode == SolveMode::InvariantOnly || merge.aligned((&c.u, &c.v), (&c.v, &c.u), 2.0 * c.error_estimate);
            let (mut u, mut v) = (c.u.clone(), c.v.clone());
            if invariant {
                // Report the symmetric average.
                let avg = midpoint(&u, &v);
                u = avg.clone();
                v = avg;
            } else if u.iter().zip(&v).find(|(a, b)| a != b).is_some_and(|(a, b)| a < b) {
                std::mem::swap(&mut u, &mut v);
            }
            let lambda_out = induced(&sys.nbrs, r, &u, &v);
            GibbsSolution {
                residual: fundamental_residual(h, r, &lam_hat, &u, &v),
                u,
                v,
                r,
                lambda_out,
                invariant,
                chiral: !invariant,
                error_estimate: c.error_estimate,
                hits: members.len(),
            }
        })
        .collect();
    solutions.sort_by(|a, b| {
        b.invariant.cmp(&a.invariant).then_with(|| a.u.partial_cmp(&b.u).unwrap_or(std::cmp::Ordering::Equal))
    });

    let lam_f64: Vec<f64> = lam_hat.iter().map(|l| l.to_f64().unwrap()).collect();
    let symmetry_reduced = lambda_automorphisms(h, &lam_f64).map(|autos| {
        let n = solutions.len();
        let mut uf = UnionFind::new(n);
        for a in 0..n {
            let sa = &solutions[a];
            for p in &autos {
                let pu: Vec<R> = (0..q).map(|i| sa.u[p[i]]).collect();
                let pv: Vec<R> = (0..q).map(|i| sa.v[p[i]]).collect();
                for b in 0..n {
                    let sb = &solutions[b];
                    if merge.same((&pu, &pv), (&sb.u, &sb.v), sa.error_estimate + sb.error_estimate) {
                        uf.union(a, b);
                    }
                }
            }
        }
        (0..n).filter(|&i| uf.find(i) == i).count()
    });

    Ok(SolveReport {
        mode,
        solutions,
        phases: if bipartite { 2 } else { 1 },
        starts: opts.starts,
        converged,
        symmetry_reduced,
    })
}

/// `u_i / (Σ_{j~i} v_j)^r`, normalized.
fn induced<R: Real>(nbrs: &[Vec<usize>], r: usize, u: &[R], v: &[R]) -> Vec<R> {
    let raw: Vec<R> = nbrs
        .iter()
        .enumerate()
        .map(|(i, nb)| u[i] / nb.iter().fold(R::zero(), |a, &j| a + v[j]).powi(r as i32))
        .collect();
    let s = raw.iter().fold(R::zero(), |a, &b| a + b);
    raw.into_iter().map(|x| x / s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn hinge_has_three_invariant_solutions() {
        let h = ConstraintGraph::hinge();
        let rep = solve_fundamental(&h, 2, &[49.0, 18.0, 49.0], &SolveOptions::default()).unwrap();
        assert_eq!(rep.invariant_count(), 3, "{rep:#?}");
        let profiles: Vec<Vec<f64>> = rep.invariant_solutions().map(|s| s.profile()).collect();
        let p421 = [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
        let p124 = [1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0];
        assert!(profiles.iter().any(|p| close(p, &p421, 1e-8)));
        assert!(profiles.iter().any(|p| close(p, &p124, 1e-8)));
        assert!(profiles.iter().any(|p| (p[0] - p[2]).abs() < 1e-8));
        assert_eq!(rep.symmetry_reduced, Some(2));
    }

    #[test]
    fn triangle_counts() {
        let h = ConstraintGraph::complete(3).unwrap();
        let uniform = solve_fundamental(&h, 2, &[1.0, 1.0, 1.0], &SolveOptions::default()).unwrap();
        assert_eq!(uniform.class_count(), 1, "{uniform:#?}");
        let skew = solve_fundamental(&h, 2, &[2.0, 1.0, 1.0], &SolveOptions::default()).unwrap();
        assert!(skew.class_count() > 1, "{skew:#?}");
        assert_eq!(skew.invariant_count(), 1);
    }

    #[test]
    fn bipartite_edge_has_two_phases() {
        let h = ConstraintGraph::complete(2).unwrap();
        let rep = solve_fundamental(&h, 2, &[1.0, 1.0], &SolveOptions::default()).unwrap();
        assert_eq!(rep.mode, SolveMode::InvariantOnly);
        assert_eq!(rep.class_count(), 1);
        assert_eq!(rep.semi_invariant_count(), 2);
    }

    #[test]
    fn results_are_swap_symmetric_and_verified() {
        let h = ConstraintGraph::complete(3).unwrap();
        let lam = [0.5, 0.25, 0.25];
        let rep = solve_fundamental(&h, 2, &lam, &SolveOptions::default()).unwrap();
        for s in &rep.solutions {
            assert!(fundamental_residual(&h, 2, &lam, &s.u, &s.v) < 1e-10);
            assert!(fundamental_residual(&h, 2, &lam, &s.v, &s.u) < 1e-10);
            let total: f64 = s.u.iter().chain(&s.v).sum();
            assert!((total - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_precision_runs() {
        let h = ConstraintGraph::hard_core();
        let opts = SolveOptions { tol: 1e-4, dedup_tol: 1e-3, starts: 20, ..SolveOptions::default() };
        let rep = solve_fundamental(&h, 2, &[2.0f32, 1.0], &opts).unwrap();
        assert_eq!(rep.invariant_count(), 1);
    }

    #[test]
    fn singular_root_is_not_split() {
        // At t = 9/4 the symmetric hinge solution is a pitchfork point.
        let h = ConstraintGraph::hinge();
        for t in [2.25, 2.2499995] {
            let rep = solve_fundamental(&h, 2, &[t, 1.0, t], &SolveOptions::default()).unwrap();
            assert_eq!(rep.invariant_count(), 1, "t = {t}");
        }
        let rep = solve_fundamental(&h, 2, &[2.2500005, 1.0, 2.2500005], &SolveOptions::default()).unwrap();
        assert_eq!(rep.invariant_count(), 3);
    }
}
