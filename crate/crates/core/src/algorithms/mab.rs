use rand::{Rng, RngCore};

use super::AlgError;
use crate::projections::project_simplex;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Probabilities below this are treated as numerically zero before sampling.
pub const MIN_ARM_PROB: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MabOutcome<T> {
    pub p: Vector<T>,
    pub arm: usize,
    /// Whether tiny coordinates had to be clipped before sampling.
    pub clipped: bool,
}

/// Bandit step: draw arm `i ~ p`, observe its cost `c_i`, lower `p_i` by
/// `alpha c_i / p_i` and project back onto the simplex.
pub fn mab_step<T: Scalar>(
    p: &Vector<T>,
    alpha: T,
    mut cost: impl FnMut(usize, &mut dyn RngCore) -> T,
    rng: &mut dyn RngCore,
) -> Result<MabOutcome<T>, AlgError> {
    let floor = T::c(MIN_ARM_PROB);
    let mut probs = p.clone();
    let mut clipped = false;
    for v in probs.as_mut_slice() {
        if *v < floor && *v != T::zero() {
            *v = T::zero();
            clipped = true;
        }
    }
    let total = probs.sum();
    if !(total > T::zero()) || !total.is_finite() {
        return Err(AlgError::DegenerateDistribution { t: 0 });
    }
    if clipped {
        probs.scale_mut(T::one() / total);
    }

    let u = T::c(rng.random::<f64>()) * probs.sum();
    let mut acc = T::zero();
    let mut arm = None;
    for (i, &pi) in probs.iter().enumerate() {
        if pi > T::zero() {
            arm = Some(i);
            acc += pi;
            if u < acc {
                break;
            }
        }
    }
    let arm = arm.ok_or(AlgError::DegenerateDistribution { t: 0 })?;

    if alpha == T::zero() {
        return Ok(MabOutcome { p: probs, arm, clipped });
    }
    let c = cost(arm, rng);
    let mut y = probs;
    let pa = y[arm];
    y[arm] = pa - alpha * c / pa;
    if !y.is_finite() {
        return Err(AlgError::NonFinite { t: 0 });
    }
    Ok(MabOutcome { p: project_simplex(&y), arm, clipped })
}
