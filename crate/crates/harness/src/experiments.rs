//! Staged linear-convergence runs and fixed-step tail experiments.

use rayon::prelude::*;
use serde::Serialize;
use sharpsa::algorithms::{run_staged, AlgError, Algorithm};
use sharpsa::fit::{fit_tail, ols};
use sharpsa::schedule::StepSchedule;
use sharpsa::{Problem, RngStream};

use crate::config::ExperimentConfig;
use crate::runner::final_iterates;
use crate::HarnessError;

/// Stages whose error ratio exceeds this are flagged as not halving.
pub const RATIO_FLAG: f64 = 0.75;

/// Quantile window of the tail fit.
pub const TAIL_Q_LO: f64 = 0.5;
pub const TAIL_Q_HI: f64 = 0.99;

/// Bounds on `J(alpha_{i+1}) / J(alpha_i)` and on the slope of `ln J` against
/// `ln alpha` for an alpha-independent tail exponent.
pub const SCALING_RATIO: (f64, f64) = (0.7, 1.4);
pub const SCALING_SLOPE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage_ends: Vec<usize>,
    /// Mean of `|x_hat_s - x*|` over replications; entry 0 is the start.
    pub mean_errors: Vec<f64>,
    pub mean_log2_errors: Vec<f64>,
    /// `mean_errors[s] / mean_errors[s - 1]` for `s = 1..=S`.
    pub ratios: Vec<f64>,
    /// OLS slope of the mean log2 error against the stage index.
    pub log2_slope: f64,
    /// 1-based stages with ratio above [`RATIO_FLAG`].
    pub flagged: Vec<usize>,
    /// Stage errors of each successful replication.
    pub errors: Vec<Vec<f64>>,
    pub failures: usize,
}

impl StageReport {
    /// Mean of the first `n` stage ratios.
    pub fn mean_ratio(&self, n: usize) -> f64 {
        let r = &self.ratios[..n.min(self.ratios.len())];
        r.iter().sum::<f64>() / r.len() as f64
    }
}

/// Runs `reps` staged replications of `base` under `schedule`.
pub fn linear_convergence(
    problem: &dyn Problem<f64>,
    base: &Algorithm<f64>,
    schedule: &StepSchedule<f64>,
    reps: usize,
    seed: u64,
) -> Result<StageReport, HarnessError> {
    let runs: Vec<_> = (0..reps as u64)
        .into_par_iter()
        .map(|r| run_staged(problem, base, schedule, &mut RngStream::new(seed, r).rng()))
        .collect();
    if let Some(Err(AlgError::InvalidConfig(msg))) = runs.first() {
        return Err(HarnessError::Config(msg.clone()));
    }
    let failures = runs.iter().filter(|r| r.is_err()).count();
    let ok: Vec<_> = runs.into_iter().filter_map(Result::ok).collect();
    if ok.is_empty() {
        return Err(HarnessError::AllFailed(reps));
    }
    let stage_ends = ok[0].stage_ends.clone();
    let errors: Vec<Vec<f64>> = ok.iter().map(|r| r.stage_errors.clone()).collect();
    let n = errors.len() as f64;
    let stages = stage_ends.len() + 1;
    let mean_errors: Vec<f64> = (0..stages).map(|s| errors.iter().map(|e| e[s]).sum::<f64>() / n).collect();
    let mean_log2_errors: Vec<f64> =
        (0..stages).map(|s| errors.iter().map(|e| e[s].log2()).sum::<f64>() / n).collect();
    let ratios: Vec<f64> = mean_errors.windows(2).map(|w| w[1] / w[0]).collect();
    let idx: Vec<f64> = (0..stages).map(|s| s as f64).collect();
    let log2_slope = if stages >= 2 { ols(&idx, &mean_log2_errors).slope } else { f64::NAN };
    let flagged = ratios.iter().enumerate().filter(|(_, &r)| r > RATIO_FLAG).map(|(i, _)| i + 1).collect();
    Ok(StageReport { stage_ends, mean_errors, mean_log2_errors, ratios, log2_slope, flagged, errors, failures })
}

/// Staged run described by a config whose schedule is staged.
pub fn run_linear_convergence(cfg: &ExperimentConfig) -> Result<StageReport, HarnessError> {
    cfg.validate()?;
    let schedule = cfg.schedule.build()?;
    if schedule.total_iterations().is_none() {
        return Err(HarnessError::Config("linear convergence needs a staged schedule".into()));
    }
    let problem = cfg.problem.build()?;
    let algo = cfg.algorithm.build(schedule.clone())?;
    linear_convergence(problem.as_ref(), &algo, &schedule, cfg.replications, cfg.master_seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub alpha: f64,
    pub j_hat: f64,
    pub r2: f64,
    pub n_samples: usize,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingVerdict {
    /// `J(alpha_{i+1}) / J(alpha_i)`
    pub ratios: Vec<f64>,
    /// Slope of `ln J` against `ln alpha`.
    pub slope: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingTable {
    pub rows: Vec<TailRow>,
    /// `None` with fewer than two step sizes.
    pub verdict: Option<ScalingVerdict>,
    pub failures: usize,
}

/// Checks that the tail exponent `J` does not depend on the step size.
pub fn scaling_verdict(rows: &[TailRow]) -> Option<ScalingVerdict> {
    if rows.len() < 2 {
        return None;
    }
    let ratios: Vec<f64> = rows.windows(2).map(|w| w[1].j_hat / w[0].j_hat).collect();
    let x: Vec<f64> = rows.iter().map(|r| r.alpha.ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.j_hat.ln()).collect();
    let slope = ols(&x, &y).slope;
    let passed = ratios.iter().all(|r| (SCALING_RATIO.0..=SCALING_RATIO.1).contains(r)) && slope.abs() <= SCALING_SLOPE;
    Some(ScalingVerdict { ratios, slope, passed })
}

/// Optimality gaps after `iters` steps of `algo`, one per successful
/// replication, and the number of failed replications.
pub fn gap_samples(
    problem: &dyn Problem<f64>,
    algo: &Algorithm<f64>,
    iters: usize,
    reps: usize,
    seed: u64,
) -> Result<(Vec<f64>, usize), HarnessError> {
    let finals = final_iterates(problem, algo, iters, reps, seed);
    let failures = finals.iter().filter(|r| r.is_err()).count();
    let gaps: Option<Vec<f64>> = finals.iter().filter_map(|r| r.as_ref().ok()).map(|x| problem.gap(x)).collect();
    let gaps = gaps.ok_or_else(|| HarnessError::Config(format!("{} has no optimal value", problem.name())))?;
    Ok((gaps, failures))
}

/// Tail fit of the gap at step `iters` under the constant rate `alpha`.
pub fn tail_row(
    problem: &dyn Problem<f64>,
    base: &Algorithm<f64>,
    alpha: f64,
    iters: usize,
    reps: usize,
    seed: u64,
) -> Result<(TailRow, Vec<f64>, usize), HarnessError> {
    let algo = base.with_schedule(StepSchedule::constant(alpha)?);
    let (gaps, failures) = gap_samples(problem, &algo, iters, reps, seed)?;
    let fit = fit_tail(&gaps, alpha, TAIL_Q_LO, TAIL_Q_HI)?;
    let row = TailRow { alpha, j_hat: fit.j_hat, r2: fit.r2, n_samples: gaps.len(), n_points: fit.n_points };
    Ok((row, gaps, failures))
}

/// Fixed-step experiments at each alpha, with the scaling verdict. Each
/// alpha uses its own derived random stream.
pub fn tail_rate_scaling(
    problem: &dyn Problem<f64>,
    base: &Algorithm<f64>,
    alphas: &[f64],
    iters: usize,
    reps: usize,
    seed: u64,
) -> Result<ScalingTable, HarnessError> {
    let mut rows = Vec::with_capacity(alphas.len());
    let mut failures = 0;
    for (i, &alpha) in alphas.iter().enumerate() {
        let stream_seed = seed.wrapping_add(i as u64);
        let (row, _, f) = tail_row(problem, base, alpha, iters, reps, stream_seed)?;
        rows.push(row);
        failures += f;
    }
    let verdict = scaling_verdict(&rows);
    Ok(ScalingTable { rows, verdict, failures })
}
