//! Benchmark instances.

mod blackjack;
mod circle;
mod linear;
mod mdp;
mod reflected;
mod ridge;
mod spheres;

pub use blackjack::{make_blackjack, BLACKJACK_STATES};
pub use circle::{make_circle, Circle};
pub use linear::{lp2_vertices, make_lp2, make_lp2_with, make_simplex_lp, LinearProblem};
pub use mdp::{make_mdp_3state, make_mdp_dual, MdpDual, MdpError, MdpModel};
pub use reflected::{make_reflected_1d, make_unconstrained_1d, Reflected1d};
pub use ridge::{make_nn_ridge, NnRidge};
pub use spheres::{make_three_spheres, SpheresObjective, ThreeSpheres};

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Canonical benchmark names.
pub const BENCHMARKS: &[&str] =
    &["circle", "three-spheres", "nn-ridge", "lp2", "simplex50", "mab50", "mdp3", "blackjack", "reflected1d"];

pub(crate) fn gauss<T: Scalar>(rng: &mut dyn RngCore) -> T {
    let z: f64 = StandardNormal.sample(rng);
    T::c(z)
}

pub(crate) fn gauss_vec<T: Scalar>(d: usize, sd: T, rng: &mut dyn RngCore) -> Vector<T> {
    (0..d).map(|_| sd * gauss::<T>(rng)).collect()
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown benchmark '{0}'")]
    Unknown(String),
    #[error(transparent)]
    Mdp(#[from] MdpError),
    #[error("invalid option: {0}")]
    InvalidOption(String),
}

/// Overrides applied when building a benchmark by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemOptions {
    /// Gradient noise standard deviation.
    pub sigma: Option<f64>,
    /// Additive noise standard deviation on function values.
    pub value_sd: Option<f64>,
    pub start: Option<Vec<f64>>,
    /// Objective variant (three-spheres: `apex`, `height`, `literal`).
    pub variant: Option<String>,
    /// Drop the lower bound (reflected1d).
    pub unconstrained: bool,
    /// Counter-clockwise polygon for `lp2`.
    pub vertices: Option<Vec<[f64; 2]>>,
}

/// Builds a benchmark from its canonical name.
pub fn build<T: Scalar>(name: &str, opts: &ProblemOptions) -> Result<Box<dyn Problem<T>>, ProblemError> {
    let start = opts.start.as_ref().map(|s| Vector::from_f64(s));
    let sigma = opts.sigma.map(T::c);
    Ok(match name {
        "circle" => {
            let mut p = make_circle::<T>();
            if let Some(s) = sigma {
                p.sigma = s;
            }
            if let Some(v) = opts.value_sd {
                p.value_sd = T::c(v);
            }
            if let Some(x) = start {
                p.start = x;
            }
            Box::new(p)
        }
        "three-spheres" => {
            let variant = match opts.variant.as_deref() {
                None | Some("apex") => SpheresObjective::Apex,
                Some("height") => SpheresObjective::Height,
                Some("literal") => SpheresObjective::Literal,
                Some(other) => return Err(ProblemError::InvalidOption(format!("three-spheres variant '{other}'"))),
            };
            let mut p = make_three_spheres::<T>(variant);
            if let Some(s) = sigma {
                p.sigma = s;
            }
            p.start = start;
            Box::new(p)
        }
        "nn-ridge" => {
            let mut p = make_nn_ridge::<T>();
            if let Some(s) = sigma {
                p.noise_sd = s;
            }
            p.start = start;
            Box::new(p)
        }
        "lp2" | "simplex50" | "mab50" => {
            let mut p = match (name, &opts.vertices) {
                ("lp2", Some(vs)) => make_lp2_with::<T>(vs).map_err(|e| ProblemError::InvalidOption(e.to_string()))?,
                ("lp2", None) => make_lp2::<T>(),
                _ => make_simplex_lp::<T>(50),
            };
            if let Some(s) = sigma {
                p.sigma = s;
            }
            p.start = start;
            Box::new(p)
        }
        "mdp3" | "blackjack" => {
            let mut model = if name == "mdp3" { make_mdp_3state() } else { make_blackjack() };
            if let Some(s) = opts.sigma {
                model.cost_sd = s;
            }
            let mut p = make_mdp_dual::<T>(model)?;
            if let Some(x) = start {
                p.start = x;
            }
            Box::new(p)
        }
        "reflected1d" => {
            let mut p = if opts.unconstrained { make_unconstrained_1d::<T>() } else { make_reflected_1d::<T>() };
            if let Some(s) = sigma {
                p.sigma = s;
            }
            p.start = start;
            Box::new(p)
        }
        other => return Err(ProblemError::Unknown(other.to_string())),
    })
}
