use rand::RngCore;

use super::gauss;
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::projections::ConvexPiece;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Upper truncation of the half-line.
pub const X_MAX: f64 = 100.0;

/// `f(x) = (x + 1)^2` on an interval, sampled as `l(x, w) = (x + 1)^2 + w x`.
#[derive(Debug, Clone)]
pub struct Reflected1d<T> {
    pub set: ConvexPiece<T>,
    pub sigma: T,
    constrained: bool,
    optimum: OptimumInfo<T>,
    pub start: Option<Vector<T>>,
}

/// Constrained to `[0, X_MAX]`: the minimizer sits on the boundary with
/// derivative 2.
pub fn make_reflected_1d<T: Scalar>() -> Reflected1d<T> {
    Reflected1d {
        set: ConvexPiece::boxed(Vector::zeros(1), Vector::filled(1, T::c(X_MAX))).expect("valid box"),
        sigma: T::one(),
        constrained: true,
        optimum: OptimumInfo::Point(Vector::zeros(1)),
        start: None,
    }
}

/// On `[-X_MAX, X_MAX]`, where the minimizer -1 is interior and the
/// gradient vanishes there.
pub fn make_unconstrained_1d<T: Scalar>() -> Reflected1d<T> {
    Reflected1d {
        set: ConvexPiece::boxed(Vector::filled(1, T::c(-X_MAX)), Vector::filled(1, T::c(X_MAX)))
            .expect("valid box"),
        sigma: T::one(),
        constrained: false,
        optimum: OptimumInfo::Point(Vector::filled(1, -T::one())),
        start: None,
    }
}

impl<T: Scalar> Reflected1d<T> {
    pub fn is_constrained(&self) -> bool {
        self.constrained
    }
}

impl<T: Scalar> Problem<T> for Reflected1d<T> {
    fn name(&self) -> &str {
        if self.constrained {
            "reflected1d"
        } else {
            "unconstrained1d"
        }
    }

    fn dim(&self) -> usize {
        1
    }

    fn objective(&self, x: &Vector<T>) -> T {
        let y = x[0] + T::one();
        y * y
    }

    fn grad(&self, x: &Vector<T>) -> Option<Vector<T>> {
        Some(Vector::filled(1, T::c(2.0) * (x[0] + T::one())))
    }

    fn sample_grad_once(&self, x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        Vector::filled(1, T::c(2.0) * (x[0] + T::one()) + self.sigma * gauss::<T>(rng))
    }

    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T> {
        let w = self.sigma * gauss::<T>(rng);
        points.iter().map(|p| self.objective(p) + w * p[0]).collect()
    }

    fn feasible(&self) -> &dyn FeasibleSet<T> {
        &self.set
    }

    fn optimum(&self) -> &OptimumInfo<T> {
        &self.optimum
    }

    fn opt_value(&self) -> Option<T> {
        Some(if self.constrained { T::one() } else { T::zero() })
    }

    fn initial_point(&self) -> Option<Vector<T>> {
        self.start.clone()
    }

    fn sharpness(&self) -> Option<T> {
        self.constrained.then(|| T::c(2.0))
    }

    /// Quadratic: central differences are exact.
    fn kw_curvature(&self) -> Option<T> {
        Some(T::zero())
    }
}
