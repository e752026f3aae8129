use rand::RngCore;

use super::{kw_step, mab_step, psgd_step, sfw_step, AlgError, Algorithm};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::schedule::StepSchedule;
use crate::trajectory::{Checkpoints, Record, Thinning, Trajectory};
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub thinning: Thinning,
    /// Keep the iterate itself in each record.
    pub store_iterates: bool,
    /// Evaluate the distance oracle at recorded steps.
    pub record_dist: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { thinning: Thinning::default(), store_iterates: false, record_dist: true }
    }
}

/// One transition `x_t -> x_{t+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<T> {
    pub x: Vector<T>,
    pub nontrivial: bool,
    pub clipped: bool,
}

/// Applies iteration `t` of `algo` to `x`, using the step size `alpha_t` from
/// the algorithm's schedule.
pub fn step<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    algo: &Algorithm<T>,
    x: &Vector<T>,
    t: usize,
    rng: &mut dyn RngCore,
) -> Result<StepOutcome<T>, AlgError> {
    let alpha = algo.schedule().rate(t);
    let proj = |source| AlgError::Projection { t: t + 1, source };
    let (next, nontrivial, clipped) = match algo {
        Algorithm::Psgd(cfg) => {
            let (y, n) = psgd_step(problem, x, alpha, cfg.batch, rng).map_err(proj)?;
            (y, n, false)
        }
        Algorithm::Kw(cfg) => {
            let (y, n) = kw_step(problem, x, alpha, cfg.nu, cfg.shared_noise, rng).map_err(proj)?;
            (y, n, false)
        }
        Algorithm::Sfw(cfg) => (sfw_step(problem, x, alpha, cfg.batch_size(t), rng)?, false, false),
        Algorithm::Mab(_) => {
            let out = mab_step(x, alpha, |i, r| problem.sample_grad_coord(x, i, r), rng)
                .map_err(|e| e.at(t + 1))?;
            (out.p, false, out.clipped)
        }
    };
    Ok(StepOutcome { x: next, nontrivial, clipped })
}

/// Runs `iters` steps of `algo` from the problem's starting point.
pub fn run<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    algo: &Algorithm<T>,
    iters: usize,
    rng: &mut dyn RngCore,
) -> Result<Trajectory<T>, AlgError> {
    run_with(problem, algo, iters, rng, RunOptions::default(), &mut |_, _| {})
}

/// Driver with explicit options and a per-step observer `(t, x_t)`.
pub fn run_with<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    algo: &Algorithm<T>,
    iters: usize,
    rng: &mut dyn RngCore,
    opts: RunOptions,
    observe: &mut dyn FnMut(usize, &Vector<T>),
) -> Result<Trajectory<T>, AlgError> {
    let mut x = problem.start().map_err(|source| AlgError::Projection { t: 0, source })?;
    let schedule = algo.schedule();
    let mut traj = Trajectory::new(x.clone());
    let mut marks = Checkpoints::new(opts.thinning);

    let record = |t: usize, x: &Vector<T>, nontrivial: bool| Record {
        t,
        alpha: schedule.rate(t),
        x: opts.store_iterates.then(|| x.clone()),
        gap: problem.gap(x),
        dist: if opts.record_dist { problem.dist_to_opt(x) } else { None },
        nontrivial,
    };

    marks.hit(0);
    traj.records.push(record(0, &x, false));
    observe(0, &x);
    for t in 0..iters {
        let out = step(problem, algo, &x, t, rng)?;
        traj.clipped += usize::from(out.clipped);
        let (next, nontrivial) = (out.x, out.nontrivial);
        if !next.is_finite() {
            return Err(AlgError::NonFinite { t: t + 1 });
        }
        x = next;
        if nontrivial {
            traj.nontrivial_projections += 1;
            traj.last_nontrivial = Some(t + 1);
        }
        let t1 = t + 1;
        observe(t1, &x);
        if marks.hit(t1) || t1 == iters {
            traj.records.push(record(t1, &x, nontrivial));
        }
    }
    traj.iterations = iters;
    traj.final_iterate = x;
    Ok(traj)
}

/// Result of a staged (piecewise-constant rate) run.
#[derive(Debug, Clone, PartialEq)]
pub struct StagedRun<T> {
    pub trajectory: Trajectory<T>,
    /// Step index at the end of each stage.
    pub stage_ends: Vec<usize>,
    /// `|x_hat_s - x*|` with `x_hat_0` the starting point.
    pub stage_errors: Vec<T>,
    /// `err_s / err_{s-1}` for `s = 1..S`.
    pub ratios: Vec<T>,
}

/// Runs `base` under a staged schedule, reporting the error at every stage end.
pub fn run_staged<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    base: &Algorithm<T>,
    schedule: &StepSchedule<T>,
    rng: &mut dyn RngCore,
) -> Result<StagedRun<T>, AlgError> {
    let ends = schedule.stage_ends();
    let total = schedule.total_iterations().ok_or_else(|| {
        AlgError::InvalidConfig("staged run needs a staged schedule".into())
    })?;
    let algo = base.with_schedule(schedule.clone());
    let mut snapshots: Vec<Option<Vector<T>>> = vec![None; ends.len() + 1];
    let mut observe = |t: usize, x: &Vector<T>| {
        if t == 0 {
            snapshots[0] = Some(x.clone());
        } else if let Ok(i) = ends.binary_search(&t) {
            snapshots[i + 1] = Some(x.clone());
        }
    };
    let trajectory = run_with(problem, &algo, total, rng, RunOptions::default(), &mut observe)?;
    let stage_errors: Vec<T> = snapshots
        .iter()
        .map(|s| {
            s.as_ref()
                .and_then(|x| problem.dist_to_opt(x))
                .unwrap_or(T::nan())
        })
        .collect();
    let ratios = stage_errors.windows(2).map(|w| w[1] / w[0]).collect();
    Ok(StagedRun { trajectory, stage_ends: ends, stage_errors, ratios })
}
