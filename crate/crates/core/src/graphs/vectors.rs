use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::{normalize, Scalar};

macro_rules! positive_vector {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name<T>(Vec<T>);

        impl<T: Scalar> $name<T> {
            /// Rejects empty vectors and non-positive entries.
            pub fn new(values: Vec<T>) -> Result<Self> {
                if values.is_empty() {
                    return Err(Error::InvalidSize("empty vector".into()));
                }
                if let Some(i) = values.iter().position(|v| !v.is_positive()) {
                    return Err(Error::NonPositive(i));
                }
                Ok(Self(values))
            }

            pub fn uniform(q: usize) -> Self {
                Self(vec![T::one(); q])
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[T] {
                &self.0
            }

            pub fn into_inner(self) -> Vec<T> {
                self.0
            }

            /// Same direction, entries summing to one.
            pub fn normalized(&self) -> Self {
                Self(normalize(&self.0).expect("positive entries"))
            }

            pub fn scaled(&self, c: &T) -> Self {
                Self(self.0.iter().map(|v| v.clone() * c.clone()).collect())
            }

            pub fn expect_len(&self, q: usize) -> Result<()> {
                if self.len() == q {
                    Ok(())
                } else {
                    Err(Error::LengthMismatch { expected: q, got: self.len() })
                }
            }
        }

        impl<T> Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }

        impl $name<f64> {
            /// Parses a comma-separated list such as `49,18,49`.
            pub fn parse_list(s: &str) -> Result<Self> {
                let values = s
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Invalid(format!("`{x}` is not a number")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(values)
            }
        }
    };
}

positive_vector!(
    /// Positive node weights of a branching random walk.
    WeightVector
);

positive_vector!(
    /// Positive per-spin activities `λ`.
    ActivityVector
);
