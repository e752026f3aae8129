use rand::RngCore;

use super::mgf::{choose_lambda, empirical_mgf, MgfPoint};
use super::{BoundsError, Condition, ConditionReport};
use crate::algorithms::{step, Algorithm};
use crate::fit::mean_se;
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Quantity whose one-step drift is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lyapunov {
    /// `|x - x*|`, used for PSGD and Kiefer-Wolfowitz.
    Distance,
    /// `l(x) - l*`, used for stochastic Frank-Wolfe.
    Gap,
}

impl Lyapunov {
    pub fn for_algorithm<T>(algo: &Algorithm<T>) -> Self {
        match algo {
            Algorithm::Sfw(_) => Lyapunov::Gap,
            _ => Lyapunov::Distance,
        }
    }

    pub fn eval<T: Scalar, P: Problem<T> + ?Sized>(self, problem: &P, x: &Vector<T>) -> Option<f64> {
        match self {
            Lyapunov::Distance => problem.dist_to_opt(x).map(T::as_f64),
            Lyapunov::Gap => problem.gap(x).map(T::as_f64),
        }
    }
}

/// Parameters of a drift check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCheck {
    pub lyapunov: Lyapunov,
    pub kappa: f64,
    pub b: f64,
    pub n_states: usize,
    pub n_inner: usize,
}

pub type StateSampler<'a, T> = dyn FnMut(&mut dyn RngCore) -> Option<Vector<T>> + 'a;

fn collect_states<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    lyapunov: Lyapunov,
    level: f64,
    wanted: usize,
    sampler: &mut StateSampler<'_, T>,
    rng: &mut dyn RngCore,
) -> Result<Vec<(Vector<T>, f64)>, BoundsError> {
    let mut states = Vec::with_capacity(wanted);
    for _ in 0..100 * wanted.max(1) {
        if states.len() == wanted {
            break;
        }
        let Some(x) = sampler(rng) else { continue };
        let f = lyapunov.eval(problem, &x).ok_or(BoundsError::NoOptimum)?;
        if f >= level {
            states.push((x, f));
        }
    }
    if states.len() < wanted {
        return Err(BoundsError::InsufficientStates { wanted, found: states.len() });
    }
    Ok(states)
}

/// Normalized one-step increments `(f(x+) - f(x)) / alpha` from `x`.
fn increments<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    algo: &Algorithm<T>,
    lyapunov: Lyapunov,
    x: &Vector<T>,
    f0: f64,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<Vec<f64>, BoundsError> {
    let alpha = algo.schedule().rate(0).as_f64();
    (0..n)
        .map(|_| {
            let next = step(problem, algo, x, 0, rng)?;
            let f1 = lyapunov.eval(problem, &next.x).ok_or(BoundsError::NoOptimum)?;
            Ok((f1 - f0) / alpha)
        })
        .collect()
}

/// Monte Carlo drift check at the step size `alpha_0` of `algo`'s schedule.
///
/// Samples `n_states` states with `f(x) - f* >= alpha B`, estimates the mean
/// normalized increment at each from `n_inner` simulated steps, and passes
/// when every state has `mean + 2 se <= -kappa`. The report carries the
/// state with the largest `mean + 2 se`.
pub fn check_drift<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    algo: &Algorithm<T>,
    sampler: &mut StateSampler<'_, T>,
    check: &DriftCheck,
    rng: &mut dyn RngCore,
) -> Result<ConditionReport, BoundsError> {
    let alpha = algo.schedule().rate(0).as_f64();
    let states = collect_states(problem, check.lyapunov, alpha * check.b, check.n_states, sampler, rng)?;
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut mean_of_means = 0.0;
    for (x, f0) in &states {
        let incs = increments(problem, algo, check.lyapunov, x, *f0, check.n_inner, rng)?;
        let (m, se) = mean_se(&incs);
        mean_of_means += m / states.len() as f64;
        if m + 2.0 * se > worst.0 {
            worst = (m + 2.0 * se, m, se);
        }
    }
    Ok(ConditionReport {
        condition: Condition::C1,
        estimate: worst.1,
        std_error: Some(worst.2),
        threshold: -check.kappa,
        secondary: Some(mean_of_means),
        n_samples: states.len() * check.n_inner,
        passed: worst.0 <= -check.kappa,
    })
}

/// Sub-exponential noise check with the MGF curve it was based on.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseReport {
    pub report: ConditionReport,
    pub curve: Vec<MgfPoint>,
    pub chosen: Option<MgfPoint>,
    /// Largest sampled `Z`.
    pub z_max: f64,
}

/// Estimates `D` and `E` for `Z = |f(x+) - f(x)| / alpha + kappa / 2` over
/// states from `sampler`, choosing `lambda` as the largest grid value whose
/// estimate is not dominated by a single sample.
#[allow(clippy::too_many_arguments)]
pub fn check_noise<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    algo: &Algorithm<T>,
    sampler: &mut StateSampler<'_, T>,
    lyapunov: Lyapunov,
    kappa: f64,
    lambdas: &[f64],
    n_states: usize,
    n_inner: usize,
    rng: &mut dyn RngCore,
) -> Result<NoiseReport, BoundsError> {
    let states = collect_states(problem, lyapunov, f64::NEG_INFINITY, n_states, sampler, rng)?;
    let mut z = Vec::with_capacity(n_states * n_inner);
    for (x, f0) in &states {
        for inc in increments(problem, algo, lyapunov, x, *f0, n_inner, rng)? {
            z.push(inc.abs() + kappa / 2.0);
        }
    }
    let curve = empirical_mgf(&z, lambdas);
    let chosen = choose_lambda(&curve);
    let z_max = z.iter().copied().fold(0.0, f64::max);
    let report = ConditionReport {
        condition: Condition::C2,
        estimate: chosen.map_or(f64::NAN, |p| p.lambda),
        std_error: chosen.map(|p| p.d_se),
        threshold: 0.0,
        secondary: chosen.map(|p| p.e),
        n_samples: z.len(),
        passed: chosen.is_some(),
    };
    Ok(NoiseReport { report, curve, chosen, z_max })
}

/// Upper estimate of `F = max f - min f` on the feasible set.
///
/// For the distance this is the set diameter when known; otherwise the
/// largest value over `n` sampled points, plus the linear-oracle extreme
/// point in the direction of steepest ascent when the set has one.
pub fn lyapunov_range<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    lyapunov: Lyapunov,
    n: usize,
    rng: &mut dyn RngCore,
) -> Result<f64, BoundsError> {
    if lyapunov == Lyapunov::Distance {
        if let Some(d) = problem.feasible().diameter() {
            return Ok(d.as_f64());
        }
    }
    let mut best = f64::NEG_INFINITY;
    for _ in 0..n {
        let Some(x) = problem.sample_feasible(rng) else { return Err(BoundsError::NoSamples) };
        best = best.max(lyapunov.eval(problem, &x).ok_or(BoundsError::NoOptimum)?);
        if lyapunov == Lyapunov::Gap {
            if let Some(v) = problem.grad(&x).and_then(|g| problem.feasible().lmo(&-&g)) {
                best = best.max(lyapunov.eval(problem, &v).ok_or(BoundsError::NoOptimum)?);
            }
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(BoundsError::NoSamples)
    }
}
