use rand::RngCore;
use rand_distr::{Distribution, Exp1};

use super::affine::AffineEq;
use super::simplex::{project_simplex, simplex_lmo};
use super::{check_dim, ProjectionError};
use crate::problem::FeasibleSet;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// A convex set with a closed-form (or direct) Euclidean projection.
#[derive(Debug, Clone)]
pub enum ConvexPiece<T> {
    Box { lo: Vector<T>, hi: Vector<T> },
    Ball { center: Vector<T>, radius: T },
    /// `a^T x <= b`
    Halfspace { normal: Vector<T>, offset: T },
    AffineEq(AffineEq<T>),
    Simplex { dim: usize },
    NonnegOrthant { dim: usize },
}

impl<T: Scalar> ConvexPiece<T> {
    pub fn boxed(lo: Vector<T>, hi: Vector<T>) -> Result<Self, ProjectionError> {
        check_dim(lo.dim(), hi.dim())?;
        if lo.iter().zip(hi.iter()).any(|(l, h)| !(l <= h)) {
            return Err(ProjectionError::InvalidSet("box requires lo <= hi".into()));
        }
        Ok(ConvexPiece::Box { lo, hi })
    }

    pub fn ball(center: Vector<T>, radius: T) -> Result<Self, ProjectionError> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(ProjectionError::InvalidSet(format!("ball radius must be positive, got {radius}")));
        }
        Ok(ConvexPiece::Ball { center, radius })
    }

    pub fn halfspace(normal: Vector<T>, offset: T) -> Result<Self, ProjectionError> {
        if !(normal.norm_sq() > T::zero()) {
            return Err(ProjectionError::InvalidSet("halfspace normal must be nonzero".into()));
        }
        Ok(ConvexPiece::Halfspace { normal, offset })
    }

    pub fn affine_eq(rows: Vec<Vector<T>>, rhs: Vec<T>) -> Result<Self, ProjectionError> {
        AffineEq::new(rows, rhs).map(ConvexPiece::AffineEq)
    }

    pub fn simplex(dim: usize) -> Self {
        ConvexPiece::Simplex { dim }
    }

    pub fn nonneg(dim: usize) -> Self {
        ConvexPiece::NonnegOrthant { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexPiece::Box { lo, .. } => lo.dim(),
            ConvexPiece::Ball { center, .. } => center.dim(),
            ConvexPiece::Halfspace { normal, .. } => normal.dim(),
            ConvexPiece::AffineEq(a) => a.dim(),
            ConvexPiece::Simplex { dim } | ConvexPiece::NonnegOrthant { dim } => *dim,
        }
    }

    /// Nonnegative measure of how far `x` is from satisfying the constraint.
    pub fn violation(&self, x: &Vector<T>) -> T {
        let zero = T::zero();
        match self {
            ConvexPiece::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .map(|(&v, (&l, &h))| (l - v).max(v - h).max(zero))
                .fold(zero, T::max),
            ConvexPiece::Ball { center, radius } => (x.dist(center) - *radius).max(zero),
            ConvexPiece::Halfspace { normal, offset } => ((normal.dot(x) - *offset) / normal.norm()).max(zero),
            ConvexPiece::AffineEq(a) => a.residual(x),
            ConvexPiece::Simplex { .. } => {
                let neg = x.iter().map(|&v| -v).fold(zero, T::max);
                neg.max((x.sum() - T::one()).abs())
            }
            ConvexPiece::NonnegOrthant { .. } => x.iter().map(|&v| -v).fold(zero, T::max),
        }
    }

    fn project_unchecked(&self, x: &Vector<T>) -> Vector<T> {
        match self {
            ConvexPiece::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .map(|(&v, (&l, &h))| v.max(l).min(h))
                .collect(),
            ConvexPiece::Ball { center, radius } => {
                let r = x.dist(center);
                if r <= *radius {
                    x.clone()
                } else {
                    center.lerp(x, *radius / r)
                }
            }
            ConvexPiece::Halfspace { normal, offset } => {
                let excess = normal.dot(x) - *offset;
                if excess <= T::zero() {
                    x.clone()
                } else {
                    let mut y = x.clone();
                    y.axpy(-excess / normal.norm_sq(), normal);
                    y
                }
            }
            ConvexPiece::AffineEq(a) => a.project(x),
            ConvexPiece::Simplex { .. } => project_simplex(x),
            ConvexPiece::NonnegOrthant { .. } => x.map(|v| v.max(T::zero())),
        }
    }
}

/// Exact Euclidean projection onto a single piece.
pub fn project_piece<T: Scalar>(p: &ConvexPiece<T>, x: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
    check_dim(p.dim(), x.dim())?;
    Ok(p.project_unchecked(x))
}

impl<T: Scalar> FeasibleSet<T> for ConvexPiece<T> {
    fn dim(&self) -> usize {
        ConvexPiece::dim(self)
    }

    fn contains_tol(&self, x: &Vector<T>, tol: T) -> bool {
        x.dim() == self.dim() && self.violation(x) <= tol
    }

    fn project(&self, x: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
        project_piece(self, x)
    }

    fn lmo(&self, c: &Vector<T>) -> Option<Vector<T>> {
        match self {
            ConvexPiece::Box { lo, hi } => Some(
                c.iter()
                    .zip(lo.iter().zip(hi.iter()))
                    .map(|(&ci, (&l, &h))| if ci > T::zero() { l } else { h })
                    .collect(),
            ),
            ConvexPiece::Ball { center, radius } => {
                let n = c.norm();
                if n > T::zero() {
                    let mut v = center.clone();
                    v.axpy(-*radius / n, c);
                    Some(v)
                } else {
                    Some(center.clone())
                }
            }
            ConvexPiece::Simplex { .. } => Some(simplex_lmo(c)),
            _ => None,
        }
    }

    fn diameter(&self) -> Option<T> {
        match self {
            ConvexPiece::Box { lo, hi } => Some(lo.dist(hi)),
            ConvexPiece::Ball { radius, .. } => Some(*radius + *radius),
            ConvexPiece::Simplex { dim } if *dim > 1 => Some(T::c(2.0).sqrt()),
            ConvexPiece::Simplex { .. } => Some(T::zero()),
            _ => None,
        }
    }

    fn bounding_box(&self) -> Option<(Vector<T>, Vector<T>)> {
        match self {
            ConvexPiece::Box { lo, hi } => Some((lo.clone(), hi.clone())),
            ConvexPiece::Ball { center, radius } => Some((
                center.map(|c| c - *radius),
                center.map(|c| c + *radius),
            )),
            ConvexPiece::Simplex { dim } => Some((Vector::zeros(*dim), Vector::filled(*dim, T::one()))),
            _ => None,
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Option<Vector<T>> {
        match self {
            // Normalized exponentials are uniform on the simplex.
            ConvexPiece::Simplex { dim } => {
                let e: Vec<f64> = (0..*dim).map(|_| Exp1.sample(rng)).collect();
                let s: f64 = e.iter().sum();
                Some(e.iter().map(|v| T::c(v / s)).collect())
            }
            _ => {
                let (lo, hi) = self.bounding_box()?;
                crate::problem::rejection_sample(self, &lo, &hi, rng)
            }
        }
    }
}
