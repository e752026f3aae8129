use rand::RngCore;

use super::BoundsError;
use crate::algorithms::kw_gradient;
use crate::fit::ols;
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Finite-difference bias `max_x |grad l(x) - D_nu l(x)|` over a `nu` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KwBiasReport {
    pub nus: Vec<f64>,
    pub bias: Vec<f64>,
    /// Slope of `ln bias` against `ln nu`.
    pub slope: f64,
    pub r2: f64,
    /// `max bias / nu^2` over the grid.
    pub c_hat: f64,
}

/// Evaluates function values without noise so that the central difference
/// isolates the bias.
struct Noiseless<'a, P: ?Sized>(&'a P);

impl<T: Scalar, P: Problem<T> + ?Sized> Problem<T> for Noiseless<'_, P> {
    fn name(&self) -> &str {
        self.0.name()
    }
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn objective(&self, x: &Vector<T>) -> T {
        self.0.objective(x)
    }
    fn grad(&self, x: &Vector<T>) -> Option<Vector<T>> {
        self.0.grad(x)
    }
    fn sample_grad_once(&self, x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        self.0.sample_grad_once(x, rng)
    }
    fn sample_values(&self, points: &[Vector<T>], _rng: &mut dyn RngCore) -> Vec<T> {
        points.iter().map(|p| self.0.objective(p)).collect()
    }
    fn feasible(&self) -> &dyn FeasibleSet<T> {
        self.0.feasible()
    }
    fn optimum(&self) -> &OptimumInfo<T> {
        self.0.optimum()
    }
    fn opt_value(&self) -> Option<T> {
        self.0.opt_value()
    }
}

/// Measures the central-difference bias of the Kiefer-Wolfowitz estimator at
/// `points` for each half-width in `nus`. Values are noise-free, so the
/// estimate is exact up to rounding.
pub fn kw_bias_profile<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    points: &[Vector<T>],
    nus: &[f64],
    rng: &mut dyn RngCore,
) -> Result<KwBiasReport, BoundsError> {
    if nus.len() < 2 {
        return Err(BoundsError::OutOfRange { name: "nus", value: nus.len() as f64, reason: "need at least two widths" });
    }
    let exact = Noiseless(problem);
    let mut bias = Vec::with_capacity(nus.len());
    for &nu in nus {
        let mut worst = 0.0f64;
        for x in points {
            let g = problem.grad(x).ok_or(BoundsError::NoGradient)?;
            let fd = kw_gradient(&exact, x, T::c(nu), true, rng);
            worst = worst.max((&g - &fd).norm().as_f64());
        }
        bias.push(worst);
    }
    let c_hat = nus.iter().zip(&bias).map(|(nu, b)| b / (nu * nu)).fold(0.0, f64::max);
    let (slope, r2) = if bias.iter().all(|&b| b > 0.0) {
        let lx: Vec<f64> = nus.iter().map(|n| n.ln()).collect();
        let ly: Vec<f64> = bias.iter().map(|b| b.ln()).collect();
        let fit = ols(&lx, &ly);
        (fit.slope, fit.r2)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(KwBiasReport { nus: nus.to_vec(), bias, slope, r2, c_hat })
}
