//! Experiment harness: TOML configs, seeded parallel replications, slope and
//! tail fits, and CSV/JSON output.

pub mod checks;
pub mod config;
pub mod experiments;
pub mod runner;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{AlgorithmSpec, ExperimentConfig, FitSpec, Metric, OutputSpec, ProblemSpec, ScheduleSpec};
pub use experiments::{
    linear_convergence, run_linear_convergence, scaling_verdict, tail_rate_scaling, ScalingTable, StageReport, TailRow,
};
pub use runner::{run_experiment, simulate, ExperimentOutcome, Simulation};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Problem(#[from] sharpsa::problems::ProblemError),
    #[error(transparent)]
    Schedule(#[from] sharpsa::ScheduleError),
    #[error(transparent)]
    Algorithm(#[from] sharpsa::algorithms::AlgError),
    #[error(transparent)]
    Bounds(#[from] sharpsa::bounds::BoundsError),
    #[error(transparent)]
    Fit(#[from] sharpsa::fit::FitError),
    #[error("all {0} replications failed")]
    AllFailed(usize),
}

impl HarnessError {
    /// Process exit code: 1 for configuration problems, 3 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Io { .. } => 3,
            _ => 1,
        }
    }
}
