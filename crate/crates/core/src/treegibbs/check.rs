use crate::graphs::ConstraintGraph;
use crate::scalar::Scalar;

/// Worst relative deviation of the activities induced by `(u, v)` from the
/// target `lambda`, measured projectively: both sides of the equations are
/// divided by the same constant, so unequal scale factors also show up.
///
/// Evaluated directly in linear space, independent of the solver.
pub fn fundamental_residual<T: Scalar>(h: &ConstraintGraph, r: usize, lambda: &[T], u: &[T], v: &[T]) -> f64 {
    let q = h.q();
    let f = |x: &T| x.to_f64_lossy();
    let lam_total: f64 = lambda.iter().map(f).sum();
    let mut from_u = vec![0.0; q];
    let mut from_v = vec![0.0; q];
    for i in 0..q {
        let mut sum_u = 0.0;
        let mut sum_v = 0.0;
        for j in 0..q {
            if h.adj(i, j) {
                sum_u += f(&u[j]);
                sum_v += f(&v[j]);
            }
        }
        from_u[i] = f(&u[i]) / sum_v.powi(r as i32);
        from_v[i] = f(&v[i]) / sum_u.powi(r as i32);
    }
    let scale: f64 = from_u.iter().sum::<f64>() / lam_total;
    let mut worst: f64 = 0.0;
    for i in 0..q {
        let target = f(&lambda[i]) * scale;
        worst = worst.max((from_u[i] / target - 1.0).abs());
        worst = worst.max((from_v[i] / target - 1.0).abs());
    }
    if worst.is_nan() {
        f64::INFINITY
    } else {
        worst
    }
}
