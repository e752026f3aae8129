use rand::{Rng, RngCore};

use super::BoundsError;

/// Tail of the scaled error `n (theta - max_i U_i)` for `U_i ~ U[0, theta]`:
/// returns `((1 - z / (n theta))^n, exp(-z / theta))`.
pub fn uniform_mle_tail(theta: f64, n: u64, z: f64) -> Result<(f64, f64), BoundsError> {
    if !(theta > 0.0) {
        return Err(BoundsError::OutOfRange { name: "theta", value: theta, reason: "must be positive" });
    }
    if n == 0 {
        return Err(BoundsError::OutOfRange { name: "n", value: 0.0, reason: "must be at least 1" });
    }
    let scale = n as f64 * theta;
    if !(0.0..=scale).contains(&z) {
        return Err(BoundsError::OutOfRange { name: "z", value: z, reason: "must lie in [0, n theta]" });
    }
    let exact = (n as f64 * (-z / scale).ln_1p()).exp();
    Ok((exact, (-z / theta).exp()))
}

/// One draw of `n (theta - max_i U_i)` from `n` explicit uniforms.
pub fn sample_uniform_mle(theta: f64, n: usize, rng: &mut dyn RngCore) -> f64 {
    let mut max = 0.0f64;
    for _ in 0..n {
        max = max.max(rng.random::<f64>() * theta);
    }
    n as f64 * (theta - max)
}
