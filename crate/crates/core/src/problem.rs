//! The optimization-instance abstraction consumed by every algorithm.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, RngCore};

use crate::projections::ProjectionError;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Closed convex feasible region with a Euclidean projection.
pub trait FeasibleSet<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    /// Membership with the default tolerance.
    fn contains(&self, x: &Vector<T>) -> bool {
        self.contains_tol(x, T::member_tol())
    }

    fn contains_tol(&self, x: &Vector<T>, tol: T) -> bool;

    fn project(&self, x: &Vector<T>) -> Result<Vector<T>, ProjectionError>;

    /// `argmin_{v in X} c^T v`, when the set supports it.
    fn lmo(&self, _c: &Vector<T>) -> Option<Vector<T>> {
        None
    }

    fn diameter(&self) -> Option<T> {
        None
    }

    /// Axis-aligned box containing the set, used for rejection sampling.
    fn bounding_box(&self) -> Option<(Vector<T>, Vector<T>)> {
        None
    }

    /// A random feasible point. The default rejection-samples the bounding box.
    fn sample(&self, rng: &mut dyn RngCore) -> Option<Vector<T>> {
        let (lo, hi) = self.bounding_box()?;
        rejection_sample(self, &lo, &hi, rng)
    }
}

/// Uniform point of `set` obtained by rejection from the box `[lo, hi]`.
pub fn rejection_sample<T: Scalar, S: FeasibleSet<T> + ?Sized>(
    set: &S,
    lo: &Vector<T>,
    hi: &Vector<T>,
    rng: &mut dyn RngCore,
) -> Option<Vector<T>> {
    for _ in 0..100_000 {
        let x: Vector<T> = lo
            .iter()
            .zip(hi.iter())
            .map(|(&l, &h)| l + (h - l) * T::c(rng.random::<f64>()))
            .collect();
        if set.contains(&x) {
            return Some(x);
        }
    }
    None
}

type ProjectOracle<T> = Arc<dyn Fn(&Vector<T>) -> Vector<T> + Send + Sync>;

/// What is known about the optimal set.
#[derive(Clone)]
pub enum OptimumInfo<T> {
    Point(Vector<T>),
    Points(Vec<Vector<T>>),
    /// Projection onto the optimal set; the distance is measured to its output.
    Oracle(ProjectOracle<T>),
    Unknown,
}

impl<T: Scalar> OptimumInfo<T> {
    pub fn oracle(f: impl Fn(&Vector<T>) -> Vector<T> + Send + Sync + 'static) -> Self {
        OptimumInfo::Oracle(Arc::new(f))
    }

    /// Nearest known optimal point.
    pub fn nearest(&self, x: &Vector<T>) -> Option<Vector<T>> {
        match self {
            OptimumInfo::Point(p) => Some(p.clone()),
            OptimumInfo::Points(ps) => ps
                .iter()
                .min_by(|a, b| a.dist(x).partial_cmp(&b.dist(x)).unwrap_or(std::cmp::Ordering::Equal))
                .cloned(),
            OptimumInfo::Oracle(f) => Some(f(x)),
            OptimumInfo::Unknown => None,
        }
    }

    pub fn distance(&self, x: &Vector<T>) -> Option<T> {
        self.nearest(x).map(|p| p.dist(x))
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, OptimumInfo::Unknown)
    }
}

impl<T: fmt::Debug> fmt::Debug for OptimumInfo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OptimumInfo::Point(p) => f.debug_tuple("Point").field(p).finish(),
            OptimumInfo::Points(ps) => f.debug_tuple("Points").field(ps).finish(),
            OptimumInfo::Oracle(_) => f.write_str("Oracle(..)"),
            OptimumInfo::Unknown => f.write_str("Unknown"),
        }
    }
}

/// A stochastic optimization instance: minimize `l(x)` over a feasible set.
pub trait Problem<T: Scalar>: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    /// Exact mean objective.
    fn objective(&self, x: &Vector<T>) -> T;

    /// Exact (sub)gradient of the mean objective, when known.
    fn grad(&self, _x: &Vector<T>) -> Option<Vector<T>> {
        None
    }

    /// One unbiased gradient sample.
    fn sample_grad_once(&self, x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T>;

    /// Average of `batch` independent gradient samples.
    fn sample_grad(&self, x: &Vector<T>, rng: &mut dyn RngCore, batch: usize) -> Vector<T> {
        let batch = batch.max(1);
        let mut acc = self.sample_grad_once(x, rng);
        for _ in 1..batch {
            let g = self.sample_grad_once(x, rng);
            acc.axpy(T::one(), &g);
        }
        if batch > 1 {
            acc.scale_mut(T::one() / T::from_count(batch));
        }
        acc
    }

    /// One noisy sample of the `i`-th gradient coordinate.
    fn sample_grad_coord(&self, x: &Vector<T>, i: usize, rng: &mut dyn RngCore) -> T {
        self.sample_grad_once(x, rng)[i]
    }

    /// Noisy objective values at several points sharing one noise realization.
    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T>;

    fn sample_value(&self, x: &Vector<T>, rng: &mut dyn RngCore) -> T {
        self.sample_values(std::slice::from_ref(x), rng)[0]
    }

    fn feasible(&self) -> &dyn FeasibleSet<T>;

    fn optimum(&self) -> &OptimumInfo<T>;

    fn opt_value(&self) -> Option<T>;

    /// Problem-specific starting iterate; `None` means "project the origin".
    fn initial_point(&self) -> Option<Vector<T>> {
        None
    }

    /// Declared sharpness constant, if known analytically.
    fn sharpness(&self) -> Option<T> {
        None
    }

    /// Constant `c` bounding the central-difference bias by `c nu^2`.
    fn kw_curvature(&self) -> Option<T> {
        None
    }

    /// Feasible point drawn for condition checks.
    fn sample_feasible(&self, rng: &mut dyn RngCore) -> Option<Vector<T>> {
        self.feasible().sample(rng)
    }

    fn gap(&self, x: &Vector<T>) -> Option<T> {
        self.opt_value().map(|v| self.objective(x) - v)
    }

    fn dist_to_opt(&self, x: &Vector<T>) -> Option<T> {
        self.optimum().distance(x)
    }

    /// Starting iterate used by the drivers.
    fn start(&self) -> Result<Vector<T>, ProjectionError> {
        match self.initial_point() {
            Some(x) => Ok(x),
            None => self.feasible().project(&Vector::zeros(self.dim())),
        }
    }
}
