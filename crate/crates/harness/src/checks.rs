//! Condition checks behind `sharpsa check`.

use rand::RngCore;
use sharpsa::algorithms::{Algorithm, PsgdConfig};
use sharpsa::bounds::{
    check_drift, check_noise, check_sharpness, kw_bias_profile, Condition, ConditionReport, DriftCheck, Lyapunov,
};
use sharpsa::schedule::StepSchedule;
use sharpsa::{Problem, RngStream, Vector};

use crate::HarnessError;

/// KW bias slopes in this range count as second order.
pub const BIAS_SLOPE: (f64, f64) = (1.8, 2.2);
/// Bias below this at every width means the difference quotient is exact.
pub const EXACT_BIAS: f64 = 1e-10;

pub const BIAS_WIDTHS: [f64; 5] = [0.025, 0.05, 0.1, 0.2, 0.4];
pub const MGF_GRID: [f64; 8] = [0.0125, 0.025, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub alpha: f64,
    pub batch: usize,
    pub b: f64,
    /// Drift margin; half the estimated sharpness constant when absent.
    pub kappa: Option<f64>,
    pub n_samples: usize,
    pub n_states: usize,
    pub n_inner: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { alpha: 0.01, batch: 1, b: 10.0, kappa: None, n_samples: 2000, n_states: 20, n_inner: 2000, seed: 0 }
    }
}

fn sharpness_margin(problem: &dyn Problem<f64>, opts: &CheckOptions, rng: &mut dyn RngCore) -> Result<f64, HarnessError> {
    match opts.kappa {
        Some(k) => Ok(k),
        None => Ok(check_sharpness(problem, opts.n_samples, rng)?.estimate / 2.0),
    }
}

/// Runs one condition check with PSGD at the constant rate `opts.alpha`.
pub fn check_condition(
    problem: &dyn Problem<f64>,
    condition: Condition,
    opts: &CheckOptions,
) -> Result<ConditionReport, HarnessError> {
    let mut rng = RngStream::new(opts.seed, 0).rng();
    let algo = Algorithm::Psgd(PsgdConfig::new(StepSchedule::constant(opts.alpha)?, opts.batch));
    let mut sampler = |r: &mut dyn RngCore| problem.sample_feasible(r);
    Ok(match condition {
        Condition::D1 => check_sharpness(problem, opts.n_samples, &mut rng)?,
        Condition::C1 => {
            let kappa = sharpness_margin(problem, opts, &mut rng)?;
            let check =
                DriftCheck { lyapunov: Lyapunov::Distance, kappa, b: opts.b, n_states: opts.n_states, n_inner: opts.n_inner };
            check_drift(problem, &algo, &mut sampler, &check, &mut rng)?
        }
        Condition::C2 | Condition::D2 => {
            let kappa = sharpness_margin(problem, opts, &mut rng)?;
            let noise = check_noise(
                problem,
                &algo,
                &mut sampler,
                Lyapunov::Distance,
                kappa,
                &MGF_GRID,
                opts.n_states,
                opts.n_inner,
                &mut rng,
            )?;
            ConditionReport { condition, ..noise.report }
        }
        Condition::D3 => {
            let points: Vec<Vector<f64>> =
                (0..opts.n_states).filter_map(|_| problem.sample_feasible(&mut rng)).collect();
            let rep = kw_bias_profile(problem, &points, &BIAS_WIDTHS, &mut rng)?;
            let exact = rep.bias.iter().all(|&b| b <= EXACT_BIAS);
            ConditionReport {
                condition,
                estimate: if exact { 0.0 } else { rep.slope },
                std_error: None,
                threshold: BIAS_SLOPE.0,
                secondary: Some(rep.c_hat),
                n_samples: points.len(),
                passed: exact || (BIAS_SLOPE.0..=BIAS_SLOPE.1).contains(&rep.slope),
            }
        }
    })
}

pub fn parse_condition(s: &str) -> Option<Condition> {
    match s.to_ascii_lowercase().as_str() {
        "c1" => Some(Condition::C1),
        "c2" => Some(Condition::C2),
        "d1" => Some(Condition::D1),
        "d2" => Some(Condition::D2),
        "d3" => Some(Condition::D3),
        _ => None,
    }
}
