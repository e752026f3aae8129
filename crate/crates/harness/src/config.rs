//! TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sharpsa::algorithms::{Algorithm, BatchRule, KwConfig, MabConfig, PsgdConfig, SfwConfig};
use sharpsa::problems::{build, ProblemOptions};
use sharpsa::schedule::{staged_schedule_a, staged_schedule_b, StepSchedule};
use sharpsa::trajectory::Thinning;
use sharpsa::Problem;

use crate::HarnessError;

/// One experiment: a benchmark, an algorithm with its schedule, and the
/// replication plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: Option<String>,
    /// Required unless the schedule is staged, in which case it defaults to
    /// the schedule's total length.
    #[serde(default)]
    pub iters: Option<usize>,
    #[serde(default = "one")]
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
    pub problem: ProblemSpec,
    pub algorithm: AlgorithmSpec,
    pub schedule: ScheduleSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub fit: FitSpec,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default)]
    pub unconstrained: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 2]>>,
}

impl ProblemSpec {
    pub fn named(name: &str) -> Self {
        Self { name: name.to_string(), ..Default::default() }
    }

    pub fn options(&self) -> ProblemOptions {
        ProblemOptions {
            sigma: self.sigma,
            value_sd: self.value_sd,
            start: self.start.clone(),
            variant: self.variant.clone(),
            unconstrained: self.unconstrained,
            vertices: self.vertices.clone(),
        }
    }

    pub fn build(&self) -> Result<Box<dyn Problem<f64>>, HarnessError> {
        Ok(build::<f64>(&self.name, &self.options())?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgorithmSpec {
    Psgd {
        #[serde(default = "one")]
        batch: usize,
    },
    Kw {
        nu: f64,
        /// Draw separate value noise for every probe.
        #[serde(default)]
        independent_noise: bool,
    },
    Sfw {
        sigma: f64,
        kappa: f64,
        /// Fixed batch size; the noise-matched rule when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        batch: Option<usize>,
    },
    Mab,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleSpec {
    /// `a / (u + t)^gamma`
    PowerLaw {
        a: f64,
        #[serde(default = "unit")]
        u: f64,
        #[serde(default = "unit")]
        gamma: f64,
    },
    Constant { alpha: f64 },
    Staged { rates: Vec<f64>, lengths: Vec<usize> },
    /// `alpha0 / factor^k` over `stages` blocks of `every` steps.
    Geometric { alpha0: f64, factor: f64, every: usize, stages: usize },
    /// Halving with calibrated constants and an error target.
    TargetedHalving { f: f64, kappa: f64, e: f64, r: f64, eps_hat: f64, delta_hat: f64 },
    /// `a / (2^s ln(s+1))` for `ceil(ln(s+1)^2)` steps, `s = 1..=stages`.
    LogHalving { a: f64, stages: usize },
}

fn unit() -> f64 {
    1.0
}

impl ScheduleSpec {
    pub fn build(&self) -> Result<StepSchedule<f64>, HarnessError> {
        Ok(match self {
            ScheduleSpec::PowerLaw { a, u, gamma } => StepSchedule::power_law(*a, *u, *gamma)?,
            ScheduleSpec::Constant { alpha } => StepSchedule::constant(*alpha)?,
            ScheduleSpec::Staged { rates, lengths } => StepSchedule::staged(rates.clone(), lengths.clone())?,
            ScheduleSpec::Geometric { alpha0, factor, every, stages } => {
                StepSchedule::geometric(*alpha0, *factor, *every, *stages)?
            }
            ScheduleSpec::TargetedHalving { f, kappa, e, r, eps_hat, delta_hat } => {
                staged_schedule_a(*f, *kappa, *e, *r, *eps_hat, *delta_hat)?.schedule
            }
            ScheduleSpec::LogHalving { a, stages } => staged_schedule_b(*a, *stages)?,
        })
    }
}

impl AlgorithmSpec {
    pub fn build(&self, schedule: StepSchedule<f64>) -> Result<Algorithm<f64>, HarnessError> {
        Ok(match self {
            AlgorithmSpec::Psgd { batch } => Algorithm::Psgd(PsgdConfig::new(schedule, *batch)),
            AlgorithmSpec::Kw { nu, independent_noise } => {
                let cfg = KwConfig::new(schedule, *nu)?;
                Algorithm::Kw(if *independent_noise { cfg.independent_noise() } else { cfg })
            }
            AlgorithmSpec::Sfw { sigma, kappa, batch } => {
                let rule = batch.map_or(BatchRule::Auto, BatchRule::Fixed);
                Algorithm::Sfw(SfwConfig::new(schedule, *sigma, *kappa, rule)?)
            }
            AlgorithmSpec::Mab => Algorithm::Mab(MabConfig { schedule }),
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThinningKind {
    Every,
    #[default]
    Geometric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub thinning: ThinningKind,
    #[serde(default = "dense_until")]
    pub dense_until: usize,
    #[serde(default = "ratio")]
    pub ratio: f64,
}

fn dense_until() -> usize {
    1000
}

fn ratio() -> f64 {
    1.1
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: None, thinning: ThinningKind::default(), dense_until: dense_until(), ratio: ratio() }
    }
}

impl OutputSpec {
    pub fn thinning(&self) -> Thinning {
        match self.thinning {
            ThinningKind::Every => Thinning::Every,
            ThinningKind::Geometric => Thinning::Geometric { dense_until: self.dense_until, ratio: self.ratio },
        }
    }
}

/// Quantity whose mean curve is fitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    #[default]
    Gap,
    Dist,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    #[serde(default)]
    pub metric: Metric,
    #[serde(default = "t_min")]
    pub t_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
}

fn t_min() -> f64 {
    100.0
}

impl Default for FitSpec {
    fn default() -> Self {
        Self { metric: Metric::Gap, t_min: t_min(), t_max: None }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.into(), source })?;
        Self::from_toml(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is serializable")
    }

    /// Checks counts and resolves every name, building the problem, schedule
    /// and algorithm once.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications == 0 {
            return Err(HarnessError::Config("replications must be at least 1".into()));
        }
        if self.iters == Some(0) {
            return Err(HarnessError::Config("iters must be at least 1".into()));
        }
        self.problem.build()?;
        let schedule = self.schedule.build()?;
        if self.iters.is_none() && schedule.total_iterations().is_none() {
            return Err(HarnessError::Config("iters is required for non-staged schedules".into()));
        }
        self.algorithm.build(schedule)?;
        if !(self.output.ratio > 1.0) {
            return Err(HarnessError::Config(format!("thinning ratio {} must exceed 1", self.output.ratio)));
        }
        Ok(())
    }

    pub fn iterations(&self) -> Result<usize, HarnessError> {
        match self.iters {
            Some(n) => Ok(n),
            None => self
                .schedule
                .build()?
                .total_iterations()
                .ok_or_else(|| HarnessError::Config("iters is required for non-staged schedules".into())),
        }
    }

    pub fn algorithm(&self) -> Result<Algorithm<f64>, HarnessError> {
        self.algorithm.build(self.schedule.build()?)
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            let kind = match self.algorithm {
                AlgorithmSpec::Psgd { .. } => "psgd",
                AlgorithmSpec::Kw { .. } => "kw",
                AlgorithmSpec::Sfw { .. } => "sfw",
                AlgorithmSpec::Mab => "mab",
            };
            format!("{}-{kind}", self.problem.name)
        })
    }
}
