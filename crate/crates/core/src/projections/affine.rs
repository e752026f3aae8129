use super::dykstra::Intersection;
use super::piece::ConvexPiece;
use super::{check_dim, ProjectionError};
use crate::linalg::{pcg_active, Cholesky, SparseCols};
use crate::problem::FeasibleSet;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Affine subspace `{x : A x = b}` with a pre-factored Gram matrix.
#[derive(Debug, Clone)]
pub struct AffineEq<T> {
    rows: Vec<Vector<T>>,
    rhs: Vec<T>,
    gram: Cholesky<T>,
}

impl<T: Scalar> AffineEq<T> {
    /// Fails with `RankDeficient` when the rows are linearly dependent.
    pub fn new(rows: Vec<Vector<T>>, rhs: Vec<T>) -> Result<Self, ProjectionError> {
        let m = rows.len();
        if m == 0 {
            return Err(ProjectionError::InvalidSet("affine set with no rows".into()));
        }
        check_dim(m, rhs.len())?;
        let d = rows[0].dim();
        for r in &rows {
            check_dim(d, r.dim())?;
        }
        let mut g = vec![T::zero(); m * m];
        for i in 0..m {
            for j in 0..=i {
                let v = rows[i].dot(&rows[j]);
                g[i * m + j] = v;
                g[j * m + i] = v;
            }
        }
        let rel = T::epsilon().sqrt() * T::c(1e-2);
        let gram = Cholesky::factor(&g, m, rel).ok_or(ProjectionError::RankDeficient { rows: m })?;
        Ok(Self { rows, rhs, gram })
    }

    pub fn dim(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn rows(&self) -> &[Vector<T>] {
        &self.rows
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }

    /// `max_i |a_i^T x - b_i|`
    pub fn residual(&self, x: &Vector<T>) -> T {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, &b)| (r.dot(x) - b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn project(&self, x: &Vector<T>) -> Vector<T> {
        let r: Vec<T> = self.rows.iter().zip(&self.rhs).map(|(a, &b)| a.dot(x) - b).collect();
        let w = self.gram.solve(&r);
        let mut y = x.clone();
        for (a, &wi) in self.rows.iter().zip(&w) {
            y.axpy(-wi, a);
        }
        y
    }
}

/// Projection onto `{x >= 0 : A x = b}` by Dykstra's algorithm alternating
/// the affine subspace and the nonnegative orthant.
pub fn project_affine_nonneg<T: Scalar>(
    a: &[Vector<T>],
    b: &[T],
    x: &Vector<T>,
) -> Result<Vector<T>, ProjectionError> {
    let d = x.dim();
    let s = Intersection::new(vec![
        ConvexPiece::affine_eq(a.to_vec(), b.to_vec())?,
        ConvexPiece::nonneg(d),
    ])?;
    s.project(x)
}

/// The polyhedron `{x >= 0 : A x = b}` with a sparse constraint matrix.
///
/// `project` solves the projection dual `min_l 1/2 |(y + A^T l)_+|^2 - b^T l`
/// by a semismooth Newton method; `project_dykstra` gives the alternating
/// projection answer for comparison.
#[derive(Debug, Clone)]
pub struct AffineNonnegSet<T> {
    a: SparseCols<T>,
    b: Vec<T>,
    pub tol: T,
    pub max_newton: usize,
}

impl<T: Scalar> AffineNonnegSet<T> {
    pub fn new(a: SparseCols<T>, b: Vec<T>) -> Result<Self, ProjectionError> {
        check_dim(a.rows, b.len())?;
        let tol = (T::proj_tol() * T::c(1e-2)).max(T::epsilon() * T::c(64.0));
        Ok(Self { a, b, tol, max_newton: 200 })
    }

    pub fn from_dense(rows: &[Vector<T>], b: Vec<T>) -> Result<Self, ProjectionError> {
        let dense: Vec<Vec<T>> = rows.iter().map(|r| r.as_slice().to_vec()).collect();
        Self::new(SparseCols::from_dense_rows(&dense), b)
    }

    pub fn matrix(&self) -> &SparseCols<T> {
        &self.a
    }

    pub fn rhs(&self) -> &[T] {
        &self.b
    }

    /// `max_i |(A x - b)_i|`
    pub fn residual(&self, x: &Vector<T>) -> T {
        self.a
            .mul(x.as_slice())
            .iter()
            .zip(&self.b)
            .map(|(&ax, &b)| (ax - b).abs())
            .fold(T::zero(), T::max)
    }

    /// The same set with one extra equality row appended.
    pub fn with_row(&self, row: &Vector<T>, rhs: T) -> Self {
        let m = self.a.rows;
        let mut a = self.a.clone();
        a.rows = m + 1;
        for (col, &v) in a.cols.iter_mut().zip(row.iter()) {
            if v != T::zero() {
                col.push((m, v));
            }
        }
        let mut b = self.b.clone();
        b.push(rhs);
        Self { a, b, tol: self.tol, max_newton: self.max_newton }
    }

    fn dual_value(&self, y: &[T], lambda: &[T]) -> (T, Vec<T>, Vec<T>) {
        let atl = self.a.mul_t(lambda);
        let w: Vec<T> = y.iter().zip(&atl).map(|(&yi, &ai)| yi + ai).collect();
        let z: Vec<T> = w.iter().map(|&v| v.max(T::zero())).collect();
        let half = T::c(0.5);
        let val = half * z.iter().map(|&v| v * v).sum::<T>() - self.b.iter().zip(lambda).map(|(&b, &l)| b * l).sum::<T>();
        (val, w, z)
    }

    fn grad(&self, z: &[T]) -> Vec<T> {
        self.a.mul(z).iter().zip(&self.b).map(|(&az, &b)| az - b).collect()
    }

    pub fn project_newton(&self, y: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
        check_dim(self.a.ncols(), y.dim())?;
        let m = self.a.rows;
        let y = y.as_slice();
        let inf_norm = |v: &[T]| v.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
        let sq_norm = |v: &[T]| v.iter().map(|&x| x * x).sum::<T>();

        let mut lambda = vec![T::zero(); m];
        let (mut val, mut w, mut z) = self.dual_value(y, &lambda);
        let mut r = self.grad(&z);
        for _ in 0..self.max_newton {
            if inf_norm(&r) <= self.tol {
                return Ok(z.into());
            }
            let active: Vec<bool> = w.iter().map(|&v| v > T::zero()).collect();
            let shift = T::epsilon().sqrt() * T::c(1e-4);
            let neg_r: Vec<T> = r.iter().map(|&v| -v).collect();
            let mut d = pcg_active(&self.a, &active, shift, &neg_r, T::epsilon() * T::c(100.0), 4 * m + 50);
            let mut slope: T = r.iter().zip(&d).map(|(&a, &b)| a * b).sum();
            if !(slope < T::zero()) {
                d = neg_r;
                slope = -sq_norm(&r);
            }

            // Full step if it halves the residual, otherwise Armijo backtracking on the dual.
            let step_to = |s: T| -> Vec<T> { lambda.iter().zip(&d).map(|(&l, &di)| l + s * di).collect() };
            let trial = step_to(T::one());
            let (tv, tw, tz) = self.dual_value(y, &trial);
            let tr = self.grad(&tz);
            if sq_norm(&tr) <= T::c(0.25) * sq_norm(&r) || tv <= val + T::c(1e-4) * slope {
                lambda = trial;
                (val, w, z, r) = (tv, tw, tz, tr);
                continue;
            }
            let mut s = T::c(0.5);
            let mut accepted = false;
            while s > T::c(1e-30) {
                let trial = step_to(s);
                let (tv, tw, tz) = self.dual_value(y, &trial);
                if tv <= val + T::c(1e-4) * s * slope {
                    lambda = trial;
                    r = self.grad(&tz);
                    (val, w, z) = (tv, tw, tz);
                    accepted = true;
                    break;
                }
                s = s * T::c(0.5);
            }
            if !accepted {
                break;
            }
        }
        if inf_norm(&r) <= self.tol {
            return Ok(z.into());
        }
        Err(ProjectionError::NonConvergence { sweeps: self.max_newton, residual: inf_norm(&r).as_f64() })
    }

    /// Alternating-projection answer, used to cross-check `project_newton`.
    pub fn project_dykstra(&self, y: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
        let rows: Vec<Vector<T>> = self.a.to_dense_rows().into_iter().map(Vector::from).collect();
        project_affine_nonneg(&rows, &self.b, y)
    }
}

impl<T: Scalar> FeasibleSet<T> for AffineNonnegSet<T> {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn contains_tol(&self, x: &Vector<T>, tol: T) -> bool {
        x.dim() == self.a.ncols() && x.iter().all(|&v| v >= -tol) && self.residual(x) <= tol
    }

    fn project(&self, x: &Vector<T>) -> Result<Vector<T>, ProjectionError> {
        self.project_newton(x)
    }
}
