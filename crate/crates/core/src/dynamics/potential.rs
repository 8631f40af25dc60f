use std::fmt;
use std::sync::Arc;

use crate::geometry::{CurvatureSpace, Sign};
use crate::Scalar;

type RealFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Attractive pair potential `V(r)` and its derivative.
#[derive(Clone)]
pub enum Potential<T> {
    /// Curved analogue of Newtonian gravity, scaled by both masses:
    /// `-G mu1 mu2 k cot(k r)` (sphere), `-G mu1 mu2 k coth(k r)`
    /// (hyperboloid), `-G mu1 mu2 / r` (plane), with `k = sqrt|kappa|`.
    CotangentGravity { g: T },
    /// Arbitrary `V` and `V'`, already including any mass factors.
    Custom {
        value: RealFn<T>,
        derivative: RealFn<T>,
    },
}

impl<T: Scalar> Potential<T> {
    pub fn cotangent(g: T) -> Self {
        Potential::CotangentGravity { g }
    }

    pub fn custom(
        value: impl Fn(T) -> T + Send + Sync + 'static,
        derivative: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Potential::Custom {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        }
    }

    /// `V = 0`: free geodesic motion.
    pub fn free() -> Self {
        Self::custom(|_| T::zero(), |_| T::zero())
    }

    /// Whether `r` lies in the open interval `(0, pi/k)` or `(0, inf)`.
    pub fn in_domain(space: &CurvatureSpace<T>, r: T) -> bool {
        r > T::zero() && r.is_finite() && space.max_distance().is_none_or(|d| r < d)
    }

    pub fn value(&self, space: &CurvatureSpace<T>, mu1: T, mu2: T, r: T) -> T {
        match self {
            Potential::CotangentGravity { g } => {
                let k = space.sqrt_abs();
                let c = -*g * mu1 * mu2;
                match space.sign() {
                    Sign::Positive => c * k / (k * r).tan(),
                    Sign::Negative => c * k / (k * r).tanh(),
                    Sign::Zero => c / r,
                }
            }
            Potential::Custom { value, .. } => value(r),
        }
    }

    pub fn derivative(&self, space: &CurvatureSpace<T>, mu1: T, mu2: T, r: T) -> T {
        match self {
            Potential::CotangentGravity { g } => {
                let k = space.sqrt_abs();
                let c = *g * mu1 * mu2;
                match space.sign() {
                    Sign::Positive => {
                        let s = (k * r).sin();
                        c * k * k / (s * s)
                    }
                    Sign::Negative => {
                        let s = (k * r).sinh();
                        c * k * k / (s * s)
                    }
                    Sign::Zero => c / (r * r),
                }
            }
            Potential::Custom { derivative, .. } => derivative(r),
        }
    }
}

impl<T: Scalar> Default for Potential<T> {
    fn default() -> Self {
        Potential::cotangent(T::one())
    }
}

impl<T: Scalar> fmt::Debug for Potential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::CotangentGravity { g } => write!(f, "CotangentGravity {{ g: {g} }}"),
            Potential::Custom { .. } => f.write_str("Custom"),
        }
    }
}
