use rand::RngCore;

use super::{gauss, gauss_vec};
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::projections::ConvexPiece;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Distance to a target point inside a disc: `l(x) = |x - x*|`.
#[derive(Debug, Clone)]
pub struct Circle<T> {
    pub set: ConvexPiece<T>,
    pub target: Vector<T>,
    optimum: OptimumInfo<T>,
    /// Gradient noise standard deviation per coordinate.
    pub sigma: T,
    /// Standard deviation of the additive noise on function values.
    pub value_sd: T,
    pub start: Vector<T>,
}

/// Disc of radius 15 at the origin, target (7, 7), started at (5, 5).
pub fn make_circle<T: Scalar>() -> Circle<T> {
    let target = Vector::from_f64(&[7.0, 7.0]);
    Circle {
        set: ConvexPiece::ball(Vector::zeros(2), T::c(15.0)).expect("valid ball"),
        optimum: OptimumInfo::Point(target.clone()),
        target,
        sigma: T::one(),
        value_sd: T::c(0.01),
        start: Vector::from_f64(&[5.0, 5.0]),
    }
}

impl<T: Scalar> Problem<T> for Circle<T> {
    fn name(&self) -> &str {
        "circle"
    }

    fn dim(&self) -> usize {
        2
    }

    fn objective(&self, x: &Vector<T>) -> T {
        x.dist(&self.target)
    }

    fn grad(&self, x: &Vector<T>) -> Option<Vector<T>> {
        let diff = x - &self.target;
        let r = diff.norm();
        Some(if r > T::zero() { diff.scale(T::one() / r) } else { diff })
    }

    fn sample_grad_once(&self, x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        let g = self.grad(x).expect("analytic gradient");
        &g + &gauss_vec(2, self.sigma, rng)
    }

    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T> {
        let w = self.value_sd * gauss::<T>(rng);
        points.iter().map(|p| self.objective(p) + w).collect()
    }

    fn feasible(&self) -> &dyn FeasibleSet<T> {
        &self.set
    }

    fn optimum(&self) -> &OptimumInfo<T> {
        &self.optimum
    }

    fn opt_value(&self) -> Option<T> {
        Some(T::zero())
    }

    fn initial_point(&self) -> Option<Vector<T>> {
        Some(self.start.clone())
    }

    fn sharpness(&self) -> Option<T> {
        Some(T::one())
    }
}
