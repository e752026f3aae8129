//! Numerical checks of the drift, noise and sharpness conditions, and the
//! constant table behind the exponential tail bound.

mod constants;
mod drift;
mod kw_bias;
mod mgf;
mod mle;
mod sharpness;

pub use constants::{bound_constants, first_stable_time, tail_bound, BoundConstants, BoundPrimitives};
pub use drift::{check_drift, check_noise, lyapunov_range, DriftCheck, Lyapunov, NoiseReport, StateSampler};
pub use kw_bias::{kw_bias_profile, KwBiasReport};
pub use mgf::{choose_lambda, empirical_mgf, MgfPoint};
pub use mle::{sample_uniform_mle, uniform_mle_tail};
pub use sharpness::{check_sharpness, polytope_sharpness_k};

use std::fmt;

use thiserror::Error;

use crate::algorithms::AlgError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("problem has no exact gradient")]
    NoGradient,
    #[error("problem has no optimum oracle")]
    NoOptimum,
    #[error("could not sample feasible points")]
    NoSamples,
    #[error("found {found} of {wanted} states with f - f* >= alpha * B")]
    InsufficientStates { wanted: usize, found: usize },
    #[error("objective is constant on the vertices; sharpness constant undefined")]
    AllOptimal,
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error("{name} = {value} out of range: {reason}")]
    OutOfRange { name: &'static str, value: f64, reason: &'static str },
    #[error(transparent)]
    Algorithm(#[from] AlgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// Drift of the Lyapunov function.
    C1,
    /// Sub-exponential increments.
    C2,
    /// Non-vanishing gradient toward the optimum.
    D1,
    /// Sub-exponential gradient noise.
    D2,
    /// Finite-difference bias of order `nu^2`.
    D3,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::C1 => "C1",
            Condition::C2 => "C2",
            Condition::D1 => "D1",
            Condition::D2 => "D2",
            Condition::D3 => "D3",
        };
        f.write_str(s)
    }
}

/// Outcome of a numerical condition check.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub condition: Condition,
    /// Main statistic: `kappa_hat` for D1, worst normalized drift for C1,
    /// selected `lambda` for C2/D2, bias constant for D3.
    pub estimate: f64,
    /// Standard error of `estimate` where it is a Monte Carlo mean.
    pub std_error: Option<f64>,
    /// Value the estimate is compared against.
    pub threshold: f64,
    /// Secondary statistic (sharpness form for D1, `E` for C2).
    pub secondary: Option<f64>,
    pub n_samples: usize,
    pub passed: bool,
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: estimate {:.6e} threshold {:.6e}",
            self.condition,
            if self.passed { "pass" } else { "fail" },
            self.estimate,
            self.threshold
        )?;
        if let Some(se) = self.std_error {
            write!(f, " se {se:.3e}")?;
        }
        if let Some(s) = self.secondary {
            write!(f, " secondary {s:.6e}")?;
        }
        write!(f, " n {}", self.n_samples)
    }
}
