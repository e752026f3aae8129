use rand::RngCore;

use crate::problem::Problem;
use crate::projections::ProjectionError;
use crate::scalar::Scalar;
use crate::schedule::StepSchedule;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct KwConfig<T> {
    pub schedule: StepSchedule<T>,
    /// Finite-difference half-width.
    pub nu: T,
    /// Share one noise draw across all `+` probes (and one across all `-` probes).
    pub shared_noise: bool,
}

impl<T: Scalar> KwConfig<T> {
    pub fn new(schedule: StepSchedule<T>, nu: T) -> Result<Self, super::AlgError> {
        if !(nu > T::zero()) || !nu.is_finite() {
            return Err(super::AlgError::InvalidConfig(format!("nu must be positive, got {nu}")));
        }
        Ok(Self { schedule, nu, shared_noise: true })
    }

    pub fn independent_noise(mut self) -> Self {
        self.shared_noise = false;
        self
    }

    /// Largest width for which the finite-difference bias keeps the drift
    /// negative: `sqrt(kappa / (3 c))`.
    pub fn nu_threshold(kappa: T, curvature: T) -> T {
        (kappa / (T::c(3.0) * curvature)).sqrt()
    }

    /// Returns (and logs) a warning when `nu` exceeds the threshold implied
    /// by the problem's declared sharpness and curvature.
    pub fn check_threshold<P: Problem<T> + ?Sized>(&self, problem: &P) -> Option<String> {
        let (kappa, c) = (problem.sharpness()?, problem.kw_curvature()?);
        let limit = Self::nu_threshold(kappa, c);
        if self.nu > limit {
            let msg = format!(
                "finite-difference width {} exceeds sqrt(kappa/3c) = {} for {}",
                self.nu,
                limit,
                problem.name()
            );
            log::warn!("{msg}");
            Some(msg)
        } else {
            None
        }
    }
}

/// Central-difference gradient estimate at `x` with half-width `nu`.
pub fn kw_gradient<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    nu: T,
    shared_noise: bool,
    rng: &mut dyn RngCore,
) -> Vector<T> {
    let d = x.dim();
    let probe = |sign: T| -> Vec<Vector<T>> {
        (0..d)
            .map(|i| {
                let mut p = x.clone();
                p[i] += sign * nu;
                p
            })
            .collect()
    };
    let (plus, minus) = (probe(T::one()), probe(-T::one()));
    let (vp, vm) = if shared_noise {
        let vp = problem.sample_values(&plus, rng);
        let vm = problem.sample_values(&minus, rng);
        (vp, vm)
    } else {
        let mut vp = Vec::with_capacity(d);
        let mut vm = Vec::with_capacity(d);
        for (p, m) in plus.iter().zip(&minus) {
            vp.push(problem.sample_value(p, rng));
            vm.push(problem.sample_value(m, rng));
        }
        (vp, vm)
    };
    let two_nu = nu + nu;
    vp.iter().zip(&vm).map(|(&a, &b)| (a - b) / two_nu).collect()
}

/// One Kiefer-Wolfowitz step: PSGD with the central-difference estimate.
pub fn kw_step<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    x: &Vector<T>,
    alpha: T,
    nu: T,
    shared_noise: bool,
    rng: &mut dyn RngCore,
) -> Result<(Vector<T>, bool), ProjectionError> {
    let c = kw_gradient(problem, x, nu, shared_noise, rng);
    super::psgd::descend(problem, x, alpha, &c)
}
