//! Floating-point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, NumCast};

/// Real scalar used for iterates, gradients and step sizes (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + NumCast + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Default stopping tolerance for iterative projections.
    const PROJ_TOL: f64;
    /// Default membership tolerance for `contains` checks.
    const MEMBER_TOL: f64;

    /// Lossy conversion from an `f64` constant.
    #[inline]
    fn c(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 constant representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        <Self as NumCast>::from(n).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }

    fn proj_tol() -> Self {
        Self::c(Self::PROJ_TOL)
    }

    fn member_tol() -> Self {
        Self::c(Self::MEMBER_TOL)
    }
}

impl Scalar for f64 {
    const PROJ_TOL: f64 = 1e-10;
    const MEMBER_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const PROJ_TOL: f64 = 1e-5;
    const MEMBER_TOL: f64 = 1e-4;
}
