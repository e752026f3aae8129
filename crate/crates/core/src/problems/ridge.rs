use rand::RngCore;

use super::gauss;
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::projections::{ConvexPiece, Intersection};
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Streaming least squares `l(x) = E[(a^T x - b)^2] / 2` with
/// `a ~ N(0, I)`, `b = a^T x_plus + e`, over the nonnegative part of a ball.
#[derive(Debug, Clone)]
pub struct NnRidge<T> {
    pub set: Intersection<T>,
    /// Unconstrained minimizer `x_plus`.
    pub x_plus: Vector<T>,
    /// Standard deviation of the label noise `e`.
    pub noise_sd: T,
    optimum: OptimumInfo<T>,
    pub start: Option<Vector<T>>,
}

/// `x_plus = (1, -1)` over `{x >= 0, |x| <= sqrt(0.9)}`.
pub fn make_nn_ridge<T: Scalar>() -> NnRidge<T> {
    let radius = T::c(0.9).sqrt();
    let set = Intersection::new(vec![
        ConvexPiece::nonneg(2),
        ConvexPiece::ball(Vector::zeros(2), radius).expect("valid ball"),
    ])
    .expect("consistent dimensions");
    NnRidge {
        set,
        x_plus: Vector::from_f64(&[1.0, -1.0]),
        noise_sd: T::one(),
        optimum: OptimumInfo::Point(Vector::new(vec![radius, T::zero()])),
        start: None,
    }
}

impl<T: Scalar> NnRidge<T> {
    fn draw(&self, rng: &mut dyn RngCore) -> (Vector<T>, T) {
        let a: Vector<T> = (0..2).map(|_| gauss::<T>(rng)).collect();
        let b = a.dot(&self.x_plus) + self.noise_sd * gauss::<T>(rng);
        (a, b)
    }
}

impl<T: Scalar> Problem<T> for NnRidge<T> {
    fn name(&self) -> &str {
        "nn-ridge"
    }

    fn dim(&self) -> usize {
        2
    }

    fn objective(&self, x: &Vector<T>) -> T {
        let d = x - &self.x_plus;
        T::c(0.5) * (d.norm_sq() + self.noise_sd * self.noise_sd)
    }

    fn grad(&self, x: &Vector<T>) -> Option<Vector<T>> {
        Some(x - &self.x_plus)
    }

    fn sample_grad_once(&self, x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        let (a, b) = self.draw(rng);
        let r = a.dot(x) - b;
        a.scale(r)
    }

    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T> {
        let (a, b) = self.draw(rng);
        points
            .iter()
            .map(|p| {
                let r = a.dot(p) - b;
                T::c(0.5) * r * r
            })
            .collect()
    }

    fn feasible(&self) -> &dyn FeasibleSet<T> {
        &self.set
    }

    fn optimum(&self) -> &OptimumInfo<T> {
        &self.optimum
    }

    fn opt_value(&self) -> Option<T> {
        self.optimum.nearest(&self.x_plus).map(|o| self.objective(&o))
    }

    fn initial_point(&self) -> Option<Vector<T>> {
        self.start.clone()
    }

    /// Quadratic mean objective: central differences are exact.
    fn kw_curvature(&self) -> Option<T> {
        Some(T::zero())
    }
}
