use crate::scalar::Real;

/// LU factorization with partial pivoting of a row-major square matrix.
#[derive(Clone, Debug)]
pub struct Lu<R> {
    n: usize,
    a: Vec<R>,
    perm: Vec<usize>,
}

impl<R: Real> Lu<R> {
    /// Returns `None` when a pivot underflows.
    pub fn factor(mut a: Vec<R>, n: usize) -> Option<Self> {
        debug_assert_eq!(a.len(), n * n);
        let tiny = R::min_positive_value().sqrt();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let piv = (col..n).max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap())?;
            if !(a[piv * n + col].abs() > tiny) {
                return None;
            }
            if piv != col {
                for k in 0..n {
                    a.swap(piv * n + k, col * n + k);
                }
                perm.swap(piv, col);
            }
            let d = a[col * n + col];
            for row in col + 1..n {
                let f = a[row * n + col] / d;
                a[row * n + col] = f;
                if f == R::zero() {
                    continue;
                }
                for k in col + 1..n {
                    let t = a[col * n + k];
                    a[row * n + k] = a[row * n + k] - f * t;
                }
            }
        }
        Some(Self { n, a, perm })
    }

    pub fn solve(&self, b: &[R]) -> Vec<R> {
        let n = self.n;
        let mut x: Vec<R> = self.perm.iter().map(|&p| b[p]).collect();
        for row in 0..n {
            for k in 0..row {
                x[row] = x[row] - self.a[row * n + k] * x[k];
            }
        }
        for row in (0..n).rev() {
            for k in row + 1..n {
                x[row] = x[row] - self.a[row * n + k] * x[k];
            }
            x[row] = x[row] / self.a[row * n + row];
        }
        x
    }
}

/// Solves `a x = b` for row-major square `a`.
pub fn solve_dense<R: Real>(a: Vec<R>, b: Vec<R>) -> Option<Vec<R>> {
    let n = b.len();
    Lu::factor(a, n).map(|lu| lu.solve(&b))
}
