//! PSGD, Kiefer-Wolfowitz, stochastic Frank-Wolfe and the bandit variant,
//! plus the drivers that turn step functions into trajectories.

mod driver;
mod kw;
mod mab;
mod psgd;
mod sfw;

pub use driver::{run, run_staged, run_with, step, RunOptions, StagedRun, StepOutcome};
pub use kw::{kw_gradient, kw_step, KwConfig};
pub use mab::{mab_step, MabOutcome, MIN_ARM_PROB};
pub use psgd::{psgd_step, PsgdConfig};
pub use sfw::{sfw_step, BatchRule, SfwConfig};

use thiserror::Error;

use crate::projections::ProjectionError;
use crate::schedule::StepSchedule;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgError {
    #[error("projection failed at t = {t}: {source}")]
    Projection { t: usize, source: ProjectionError },
    #[error("feasible set has no linear minimization oracle")]
    MissingLmo,
    #[error("probability vector degenerated at t = {t}")]
    DegenerateDistribution { t: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("non-finite iterate at t = {t}")]
    NonFinite { t: usize },
}

impl AlgError {
    pub(crate) fn at(self, t: usize) -> Self {
        match self {
            AlgError::DegenerateDistribution { .. } => AlgError::DegenerateDistribution { t },
            AlgError::NonFinite { .. } => AlgError::NonFinite { t },
            other => other,
        }
    }
}

/// Importance-sampled bandit descent on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct MabConfig<T> {
    pub schedule: StepSchedule<T>,
}

/// Algorithm choice together with its configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Algorithm<T> {
    Psgd(PsgdConfig<T>),
    Kw(KwConfig<T>),
    Sfw(SfwConfig<T>),
    Mab(MabConfig<T>),
}

impl<T: Clone> Algorithm<T> {
    pub fn schedule(&self) -> &StepSchedule<T> {
        match self {
            Algorithm::Psgd(c) => &c.schedule,
            Algorithm::Kw(c) => &c.schedule,
            Algorithm::Sfw(c) => &c.schedule,
            Algorithm::Mab(c) => &c.schedule,
        }
    }

    pub fn with_schedule(&self, schedule: StepSchedule<T>) -> Self {
        let mut out = self.clone();
        match &mut out {
            Algorithm::Psgd(c) => c.schedule = schedule,
            Algorithm::Kw(c) => c.schedule = schedule,
            Algorithm::Sfw(c) => c.schedule = schedule,
            Algorithm::Mab(c) => c.schedule = schedule,
        }
        out
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Psgd(_) => "psgd",
            Algorithm::Kw(_) => "kw",
            Algorithm::Sfw(_) => "sfw",
            Algorithm::Mab(_) => "mab",
        }
    }
}
