//! Numeric abstractions shared by the exact and floating-point code paths.
//!
//! Field-only algorithms (activity maps, detailed balance, finite measures,
//! tree dynamic programming) are written against [`Scalar`], so they run on
//! `f32`, `f64` and [`BigRational`] alike. Anything that needs `exp`/`ln`
//! (the fundamental-equation solver) is written against [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

/// A value that supports exact field arithmetic and ordering.
pub trait Scalar: Num + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// `self^exp` by repeated squaring.
    fn powu(&self, exp: u32) -> Self {
        num_traits::pow(self.clone(), exp as usize)
    }

    fn abs_diff(&self, other: &Self) -> Self {
        if self >= other {
            self.clone() - other.clone()
        } else {
            other.clone() - self.clone()
        }
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("integer conversion")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where T: Num + Clone + Debug + PartialOrd + FromPrimitive + ToPrimitive + Send + Sync + 'static {}

/// Floating-point scalars used by the iterative solvers.
pub trait Real: Scalar + num_traits::Float + Copy + Default {}

impl<T> Real for T where T: Scalar + num_traits::Float + Copy + Default {}

/// Exact rational from a float, through its binary expansion.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// `n / d` as a rational.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rescales a vector of positive rationals to the coprime integer vector with
/// the same ratios, e.g. `(1/9, 2/49, 1/9)` becomes `(49, 18, 49)`.
pub fn integer_profile(values: &[BigRational]) -> Vec<BigInt> {
    let lcm = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> =
        values.iter().map(|v| (v * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = scaled.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return scaled;
    }
    scaled.into_iter().map(|v| (v / &gcd).abs()).collect()
}

/// Divides every entry by the sum. Returns `None` if the sum is not positive.
pub fn normalize<T: Scalar>(values: &[T]) -> Option<Vec<T>> {
    let total = values.iter().cloned().fold(T::zero(), |a, b| a + b);
    if !total.is_positive() {
        return None;
    }
    Some(values.iter().map(|v| v.clone() / total.clone()).collect())
}

/// Largest absolute entry-wise difference, as `f64`.
pub fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(y).to_f64_lossy()).fold(0.0, f64::max)
}
