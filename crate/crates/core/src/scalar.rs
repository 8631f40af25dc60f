//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the geometry and dynamics are written against: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// `max(nominal, ulps * epsilon)`, so that tolerances tuned for `f64`
    /// stay attainable at lower precision.
    fn tol(nominal: f64, ulps: f64) -> Self {
        Self::lit(nominal).max(Self::lit(ulps) * Self::epsilon())
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Constraint membership tolerance, absolute after scaling coordinates by `sqrt(|kappa|)`.
pub fn constraint_tol<T: Scalar>() -> T {
    T::tol(1e-9, 64.0)
}
