use rand::RngCore;

use super::piece::{project_piece, ConvexPiece};
use super::{check_dim, ProjectionError, DEFAULT_MAX_SWEEPS};
use crate::problem::{rejection_sample, FeasibleSet};
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Intersection of convex pieces, projected onto with Dykstra's algorithm.
#[derive(Debug, Clone)]
pub struct Intersection<T> {
    pub pieces: Vec<ConvexPiece<T>>,
    pub tol: T,
    pub max_sweeps: usize,
}

impl<T: Scalar> Intersection<T> {
    pub fn new(pieces: Vec<ConvexPiece<T>>) -> Result<Self, ProjectionError> {
        let first = pieces
            .first()
            .ok_or_else(|| ProjectionError::InvalidSet("intersection of zero pieces".into()))?;
        let d = first.dim();
        for p in &pieces {
            check_dim(d, p.dim())?;
        }
        Ok(Self { pieces, tol: T::proj_tol(), max_sweeps: DEFAULT_MAX_SWEEPS })
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_sweeps(mut self, max_sweeps: usize) -> Self {
        self.max_sweeps = max_sweeps;
        self
    }

    pub fn max_violation(&self, x: &Vector<T>) -> T {
        self.pieces.iter().map(|p| p.violation(x)).fold(T::zero(), T::max)
    }

    /// Projection together with the number of sweeps used.
    pub fn project_counted(&self, x: &Vector<T>) -> Result<(Vector<T>, usize), ProjectionError> {
        check_dim(self.pieces[0].dim(), x.dim())?;
        if self.pieces.len() == 1 {
            return Ok((project_piece(&self.pieces[0], x)?, 1));
        }
        if self.max_violation(x) <= T::zero() {
            return Ok((x.clone(), 0));
        }
        let mut cur = x.clone();
        let mut corrections: Vec<Vector<T>> = vec![Vector::zeros(x.dim()); self.pieces.len()];
        let mut residual = T::infinity();
        for sweep in 1..=self.max_sweeps {
            let before = cur.clone();
            for (piece, p) in self.pieces.iter().zip(corrections.iter_mut()) {
                let shifted = &cur + p;
                let next = project_piece(piece, &shifted)?;
                *p = &shifted - &next;
                cur = next;
            }
            let change = cur.dist(&before);
            let viol = self.max_violation(&cur);
            residual = change.max(viol);
            if change < self.tol && viol <= self.tol {
                return Ok((cur, sweep));
            }
        }
        Err(ProjectionError::NonConvergence { sweeps: self.max_sweeps, residual: residual.as_f64() })
    }
}

/// Dykstra projection onto an intersection.
pub fn project_intersection<T: Scalar>(s: &Intersection<T>, x: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
    s.project_counted(x).map(|(z, _)| z)
}

impl<T: Scalar> FeasibleSet<T> for Intersection<T> {
    fn dim(&self) -> usize {
        self.pieces[0].dim()
    }

    fn contains_tol(&self, x: &Vector<T>, tol: T) -> bool {
        x.dim() == FeasibleSet::dim(self) && self.max_violation(x) <= tol
    }

    fn project(&self, x: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
        project_intersection(self, x)
    }

    fn bounding_box(&self) -> Option<(Vector<T>, Vector<T>)> {
        let mut out: Option<(Vector<T>, Vector<T>)> = None;
        for p in &self.pieces {
            if let Some((lo, hi)) = p.bounding_box() {
                out = Some(match out {
                    None => (lo, hi),
                    Some((l0, h0)) => (
                        l0.iter().zip(lo.iter()).map(|(&a, &b)| a.max(b)).collect(),
                        h0.iter().zip(hi.iter()).map(|(&a, &b)| a.min(b)).collect(),
                    ),
                });
            }
        }
        // Tighten with the nonnegativity pieces.
        if let Some((lo, hi)) = out.as_mut() {
            if self.pieces.iter().any(|p| matches!(p, ConvexPiece::NonnegOrthant { .. })) {
                *lo = lo.map(|v| v.max(T::zero()));
            }
            if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
                return None;
            }
        }
        out
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<Vector<T>> {
        let (lo, hi) = self.bounding_box()?;
        rejection_sample(self, &lo, &hi, rng)
    }

    fn diameter(&self) -> Option<T> {
        None
    }
}
