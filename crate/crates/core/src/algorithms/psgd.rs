use rand::RngCore;

use crate::problem::Problem;
use crate::projections::ProjectionError;
use crate::scalar::Scalar;
use crate::schedule::StepSchedule;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct PsgdConfig<T> {
    pub schedule: StepSchedule<T>,
    /// Gradient samples averaged per step.
    pub batch: usize,
}

impl<T> PsgdConfig<T> {
    pub fn new(schedule: StepSchedule<T>, batch: usize) -> Self {
        Self { schedule, batch: batch.max(1) }
    }
}

/// Moves `x` against `c` and projects. Returns the new point and whether
/// the pre-projection point was infeasible.
pub(crate) fn descend<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    alpha: T,
    c: &Vector<T>,
) -> Result<(Vector<T>, bool), ProjectionError> {
    let mut y = x.clone();
    y.axpy(-alpha, c);
    let set = problem.feasible();
    if set.contains(&y) {
        Ok((y, false))
    } else {
        Ok((set.project(&y)?, true))
    }
}

/// One projected stochastic gradient step `x+ = P(x - alpha c)`.
pub fn psgd_step<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    alpha: T,
    batch: usize,
    rng: &mut dyn RngCore,
) -> Result<(Vector<T>, bool), ProjectionError> {
    let c = problem.sample_grad(x, rng, batch);
    descend(problem, x, alpha, &c)
}
