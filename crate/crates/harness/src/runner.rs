//! Seeded replications, aggregation and the output files of a run.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sharpsa::algorithms::{run_with, step, AlgError, Algorithm, RunOptions};
use sharpsa::fit::{fit_loglog_window, mean_se, SlopeFit};
use sharpsa::{Problem, RngStream, Trajectory, Vector};

use crate::config::{ExperimentConfig, Metric};
use crate::HarnessError;

/// Runs failing more than this fraction of replications are reported as failed.
pub const MAX_FAILURE_RATE: f64 = 0.05;

pub const TRAJECTORY_HEADER: &str = "rep,t,alpha,gap,dist,nontrivial_proj";
pub const AGGREGATE_HEADER: &str = "t,mean_dist,se_dist,mean_gap,se_gap";

/// Runs `f` on a pool with `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool").install(f),
        None => f(),
    }
}

/// One trajectory per replication index, in index order. Replication `r`
/// draws from `RngStream::new(seed, r)`, so the result does not depend on
/// the number of workers.
pub fn replicate(
    problem: &dyn Problem<f64>,
    algo: &Algorithm<f64>,
    iters: usize,
    reps: usize,
    seed: u64,
    opts: RunOptions,
) -> Vec<Result<Trajectory<f64>, AlgError>> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| run_with(problem, algo, iters, &mut RngStream::new(seed, r).rng(), opts, &mut |_, _| {}))
        .collect()
}

/// Final iterate of each replication, without recording a trajectory.
pub fn final_iterates(
    problem: &dyn Problem<f64>,
    algo: &Algorithm<f64>,
    iters: usize,
    reps: usize,
    seed: u64,
) -> Vec<Result<Vector<f64>, AlgError>> {
    (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = RngStream::new(seed, r).rng();
            let mut x = problem.start().map_err(|source| AlgError::Projection { t: 0, source })?;
            for t in 0..iters {
                x = step(problem, algo, &x, t, &mut rng)?.x;
            }
            Ok(x)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateRow {
    pub t: usize,
    pub mean_dist: f64,
    pub se_dist: f64,
    pub mean_gap: f64,
    pub se_gap: f64,
}

impl AggregateRow {
    pub fn value(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Gap => self.mean_gap,
            Metric::Dist => self.mean_dist,
        }
    }
}

/// Mean and standard error over replications at every recorded step.
/// All trajectories must share their record times.
pub fn aggregate(trajs: &[&Trajectory<f64>]) -> Vec<AggregateRow> {
    let Some(first) = trajs.first() else { return Vec::new() };
    first
        .records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let (mut dist, mut gap) = (Vec::with_capacity(trajs.len()), Vec::with_capacity(trajs.len()));
            for tr in trajs {
                let r = &tr.records[i];
                debug_assert_eq!(r.t, rec.t);
                dist.push(r.dist.unwrap_or(f64::NAN));
                gap.push(r.gap.unwrap_or(f64::NAN));
            }
            let (mean_dist, se_dist) = mean_se(&dist);
            let (mean_gap, se_gap) = mean_se(&gap);
            AggregateRow { t: rec.t, mean_dist, se_dist, mean_gap, se_gap }
        })
        .collect()
}

/// Log-log fit of the aggregate curve of `metric`.
pub fn fit_metric(rows: &[AggregateRow], metric: Metric, t_min: f64, t_max: Option<f64>) -> Result<SlopeFit, HarnessError> {
    let series: Vec<(f64, f64)> = rows.iter().map(|r| (r.t as f64, r.value(metric))).collect();
    Ok(fit_loglog_window(&series, t_min, t_max.unwrap_or(f64::INFINITY))?)
}

/// Replications of one experiment with their aggregate curve and fit.
#[derive(Debug)]
pub struct Simulation {
    pub trajectories: Vec<Result<Trajectory<f64>, AlgError>>,
    pub aggregate: Vec<AggregateRow>,
    pub fit: Result<SlopeFit, HarnessError>,
    pub failures: usize,
}

impl Simulation {
    pub fn failure_rate(&self) -> f64 {
        self.failures as f64 / self.trajectories.len().max(1) as f64
    }

    pub fn failure_rate_exceeded(&self) -> bool {
        self.failure_rate() > MAX_FAILURE_RATE
    }

    pub fn successes(&self) -> Vec<&Trajectory<f64>> {
        self.trajectories.iter().filter_map(|r| r.as_ref().ok()).collect()
    }
}

/// Runs every replication of `cfg` and fits the aggregate curve. Failed
/// replications are excluded from the aggregate and counted.
pub fn simulate(cfg: &ExperimentConfig) -> Result<Simulation, HarnessError> {
    cfg.validate()?;
    let problem = cfg.problem.build()?;
    let algo = cfg.algorithm()?;
    let iters = cfg.iterations()?;
    let opts = RunOptions { thinning: cfg.output.thinning(), store_iterates: false, record_dist: true };
    let trajectories = replicate(problem.as_ref(), &algo, iters, cfg.replications, cfg.master_seed, opts);
    let failures = trajectories.iter().filter(|r| r.is_err()).count();
    let ok: Vec<&Trajectory<f64>> = trajectories.iter().filter_map(|r| r.as_ref().ok()).collect();
    let aggregate = aggregate(&ok);
    let fit = fit_metric(&aggregate, cfg.fit.metric, cfg.fit.t_min, cfg.fit.t_max);
    Ok(Simulation { trajectories, aggregate, fit, failures })
}

/// `{:.16e}`: 17 significant digits, enough to round-trip an `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, fmt_f64)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

pub fn write_trajectories(path: &Path, trajs: &[Result<Trajectory<f64>, AlgError>]) -> Result<(), HarnessError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{TRAJECTORY_HEADER}")?;
        for (rep, tr) in trajs.iter().enumerate() {
            let Ok(tr) = tr else { continue };
            for r in &tr.records {
                writeln!(
                    w,
                    "{rep},{},{},{},{},{}",
                    r.t,
                    fmt_f64(r.alpha),
                    fmt_opt(r.gap),
                    fmt_opt(r.dist),
                    u8::from(r.nontrivial)
                )?;
            }
        }
        w.flush()
    };
    body().map_err(io_err(path))
}

pub fn write_aggregate(path: &Path, rows: &[AggregateRow]) -> Result<(), HarnessError> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{AGGREGATE_HEADER}")?;
        for r in rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.t,
                fmt_f64(r.mean_dist),
                fmt_f64(r.se_dist),
                fmt_f64(r.mean_gap),
                fmt_f64(r.se_gap)
            )?;
        }
        w.flush()
    };
    body().map_err(io_err(path))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub t_range: (f64, f64),
    pub n_points: usize,
    pub dropped: usize,
}

impl From<&SlopeFit> for FitSummary {
    fn from(f: &SlopeFit) -> Self {
        Self {
            slope: f.slope,
            intercept: f.intercept,
            r2: f.r2,
            t_range: f.t_range,
            n_points: f.n_points,
            dropped: f.dropped,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub version: &'static str,
    pub metric: Metric,
    pub fit: Option<FitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<String>,
    pub replications: usize,
    pub failures: usize,
    pub failure_messages: Vec<(usize, String)>,
    pub wall_time_secs: f64,
    pub config: ExperimentConfig,
}

/// Version string of the build: crate version plus `git describe` output
/// when the build ran inside a checkout.
pub fn version() -> &'static str {
    concat!(env!("CARGO_PKG_VERSION"), "-", env!("SHARPSA_GIT_DESCRIBE"))
}

/// Output of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub dir: PathBuf,
    pub report: RunReport,
    pub aggregate: Vec<AggregateRow>,
}

impl ExperimentOutcome {
    pub fn failure_rate_exceeded(&self) -> bool {
        self.report.failures as f64 / self.report.replications.max(1) as f64 > MAX_FAILURE_RATE
    }
}

/// Runs `cfg` and writes `trajectories.csv`, `aggregate.csv` and `fit.json`
/// into `dir`.
pub fn run_experiment(cfg: &ExperimentConfig, dir: &Path) -> Result<ExperimentOutcome, HarnessError> {
    let start = Instant::now();
    let sim = simulate(cfg)?;
    let wall_time_secs = start.elapsed().as_secs_f64();
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write_trajectories(&dir.join("trajectories.csv"), &sim.trajectories)?;
    write_aggregate(&dir.join("aggregate.csv"), &sim.aggregate)?;
    let failure_messages = sim
        .trajectories
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.as_ref().err().map(|e| (i, e.to_string())))
        .collect();
    let report = RunReport {
        name: cfg.label(),
        version: version(),
        metric: cfg.fit.metric,
        fit: sim.fit.as_ref().ok().map(FitSummary::from),
        fit_error: sim.fit.as_ref().err().map(|e| e.to_string()),
        replications: cfg.replications,
        failures: sim.failures,
        failure_messages,
        wall_time_secs,
        config: cfg.clone(),
    };
    let path = dir.join("fit.json");
    let json = serde_json::to_string_pretty(&report).expect("report is serializable");
    fs::write(&path, json + "\n").map_err(io_err(&path))?;
    Ok(ExperimentOutcome { dir: dir.to_path_buf(), report, aggregate: sim.aggregate })
}

