//! Euclidean projections onto the feasible sets used by the benchmarks.

mod affine;
mod dykstra;
mod piece;
mod polytope;
mod simplex;

pub use affine::{project_affine_nonneg, AffineEq, AffineNonnegSet};
pub use dykstra::{project_intersection, Intersection};
pub use piece::{project_piece, ConvexPiece};
pub use polytope::Polytope;
pub use simplex::{project_simplex, simplex_lmo};

use thiserror::Error;

/// Default sweep budget for Dykstra's algorithm.
pub const DEFAULT_MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProjectionError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("projection did not converge after {sweeps} sweeps (residual {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },
    #[error("equality rows are linearly dependent ({rows} rows)")]
    RankDeficient { rows: usize },
    #[error("invalid set: {0}")]
    InvalidSet(String),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<(), ProjectionError> {
    if expected == got {
        Ok(())
    } else {
        Err(ProjectionError::DimensionMismatch { expected, got })
    }
}
