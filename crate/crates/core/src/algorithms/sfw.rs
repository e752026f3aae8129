use rand::RngCore;

use super::AlgError;
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::schedule::StepSchedule;
use crate::vector::Vector;

/// Mini-batch size policy for stochastic Frank-Wolfe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BatchRule {
    /// `m_t = ceil((3 sigma / (kappa alpha_t))^2)`
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfwConfig<T> {
    pub schedule: StepSchedule<T>,
    /// Gradient-noise scale.
    pub sigma: T,
    /// Sharpness constant.
    pub kappa: T,
    pub batch_rule: BatchRule,
}

impl<T: Scalar> SfwConfig<T> {
    pub fn new(schedule: StepSchedule<T>, sigma: T, kappa: T, batch_rule: BatchRule) -> Result<Self, AlgError> {
        if !(kappa > T::zero()) || !(sigma >= T::zero()) {
            return Err(AlgError::InvalidConfig("sfw needs kappa > 0 and sigma >= 0".into()));
        }
        if let BatchRule::Fixed(0) = batch_rule {
            return Err(AlgError::InvalidConfig("fixed batch must be at least 1".into()));
        }
        Ok(Self { schedule, sigma, kappa, batch_rule })
    }

    pub fn batch_size(&self, t: usize) -> usize {
        match self.batch_rule {
            BatchRule::Fixed(m) => m,
            BatchRule::Auto => {
                let alpha = self.schedule.rate(t);
                let m = (T::c(3.0) * self.sigma / (self.kappa * alpha)).powi(2).ceil();
                m.to_usize().unwrap_or(usize::MAX).max(1)
            }
        }
    }
}

/// One stochastic Frank-Wolfe step `x+ = (1 - alpha) x + alpha v`, where `v`
/// minimizes the averaged gradient sample over the feasible set.
pub fn sfw_step<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    alpha: T,
    batch: usize,
    rng: &mut dyn RngCore,
) -> Result<Vector<T>, AlgError> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(AlgError::InvalidConfig(format!("frank-wolfe step must lie in (0, 1], got {alpha}")));
    }
    let c = problem.sample_grad(x, rng, batch);
    let v = problem.feasible().lmo(&c).ok_or(AlgError::MissingLmo)?;
    Ok(x.lerp(&v, alpha))
}
