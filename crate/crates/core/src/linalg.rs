//! Small dense and sparse linear-algebra kernels used by the projections.

use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
/// stored row-major.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    n: usize,
    l: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factor the row-major `n x n` matrix `a`. Returns `None` when a pivot
    /// falls below `rel_tol` times the largest diagonal entry, i.e. the matrix
    /// is (numerically) singular.
    pub fn factor(a: &[T], n: usize, rel_tol: T) -> Option<Self> {
        assert_eq!(a.len(), n * n);
        let max_diag = (0..n).map(|i| a[i * n + i]).fold(T::zero(), T::max);
        if !(max_diag > T::zero()) {
            return None;
        }
        let floor = rel_tol * max_diag;
        let mut l = vec![T::zero(); n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if !(s > floor) {
                        return None;
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Some(Self { n, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        y
    }
}

/// Column-compressed sparse matrix (`m` rows, one entry list per column).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCols<T> {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> SparseCols<T> {
    pub fn from_dense_rows(rows: &[Vec<T>]) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut cols = vec![Vec::new(); n];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != T::zero() {
                    cols[j].push((i, v));
                }
            }
        }
        Self { rows: m, cols }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.ncols()]; self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                out[i][j] = v;
            }
        }
        out
    }

    /// `A x`
    pub fn mul(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows];
        for (col, &xj) in self.cols.iter().zip(x) {
            if xj != T::zero() {
                for &(i, v) in col {
                    out[i] += v * xj;
                }
            }
        }
        out
    }

    /// `A^T y`
    pub fn mul_t(&self, y: &[T]) -> Vec<T> {
        self.cols
            .iter()
            .map(|col| col.iter().map(|&(i, v)| v * y[i]).sum())
            .collect()
    }

    /// Row-major dense `A_J A_J^T` restricted to the columns where `active` is set.
    pub fn gram_active(&self, active: &[bool]) -> Vec<T> {
        let m = self.rows;
        let mut g = vec![T::zero(); m * m];
        for (col, _) in self.cols.iter().zip(active).filter(|(_, &a)| a) {
            for &(i, vi) in col {
                for &(k, vk) in col {
                    g[i * m + k] += vi * vk;
                }
            }
        }
        g
    }
}

/// Jacobi-preconditioned conjugate gradients for `(A_J A_J^T + shift I) d = rhs`.
pub fn pcg_active<T: Scalar>(
    a: &SparseCols<T>,
    active: &[bool],
    shift: T,
    rhs: &[T],
    rel_tol: T,
    max_iter: usize,
) -> Vec<T> {
    let m = a.rows;
    let apply = |v: &[T]| -> Vec<T> {
        let mut out: Vec<T> = v.iter().map(|&x| shift * x).collect();
        for (col, _) in a.cols.iter().zip(active).filter(|(_, &on)| on) {
            let s: T = col.iter().map(|&(i, vi)| vi * v[i]).sum();
            if s != T::zero() {
                for &(i, vi) in col {
                    out[i] += vi * s;
                }
            }
        }
        out
    };
    let mut diag = vec![shift; m];
    for (col, _) in a.cols.iter().zip(active).filter(|(_, &on)| on) {
        for &(i, vi) in col {
            diag[i] += vi * vi;
        }
    }
    let inv_diag: Vec<T> = diag.iter().map(|&d| if d > T::zero() { T::one() / d } else { T::one() }).collect();

    let mut x = vec![T::zero(); m];
    let mut r = rhs.to_vec();
    let rhs_norm = r.iter().map(|&v| v * v).sum::<T>().sqrt();
    if rhs_norm == T::zero() {
        return x;
    }
    let mut z: Vec<T> = r.iter().zip(&inv_diag).map(|(&ri, &di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz: T = r.iter().zip(&z).map(|(&a, &b)| a * b).sum();
    for _ in 0..max_iter {
        let ap = apply(&p);
        let pap: T = p.iter().zip(&ap).map(|(&a, &b)| a * b).sum();
        if !(pap > T::zero()) {
            break;
        }
        let step = rz / pap;
        for i in 0..m {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rn = r.iter().map(|&v| v * v).sum::<T>().sqrt();
        if rn <= rel_tol * rhs_norm {
            break;
        }
        for i in 0..m {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: T = r.iter().zip(&z).map(|(&a, &b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..m {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd() {
        let a = vec![4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0];
        let ch = Cholesky::factor(&a, 3, 1e-12).unwrap();
        let x = ch.solve(&[1.0, 2.0, 3.0]);
        for i in 0..3 {
            let row: f64 = (0..3).map(|k| a[i * 3 + k] * x[k]).sum();
            assert!((row - [1.0, 2.0, 3.0][i]).abs() < 1e-12);
        }
    }

    #[test]
    fn cholesky_detects_rank_deficiency() {
        let a = vec![1.0, 1.0, 1.0, 1.0];
        assert!(Cholesky::factor(&a, 2, 1e-12).is_none());
    }

    #[test]
    fn pcg_matches_cholesky() {
        let rows: Vec<Vec<f64>> = vec![vec![1.0, 2.0, 0.0, 1.0], vec![0.0, 1.0, 3.0, -1.0]];
        let a = SparseCols::from_dense_rows(&rows);
        let active = vec![true, true, false, true];
        let g = a.gram_active(&active);
        let rhs = [1.0, -2.0];
        let exact = Cholesky::factor(&g, 2, 1e-14).unwrap().solve(&rhs);
        let approx = pcg_active(&a, &active, 0.0, &rhs, 1e-14, 50);
        for (e, p) in exact.iter().zip(&approx) {
            assert!((e - p).abs() < 1e-10);
        }
        assert_eq!(a.to_dense_rows(), rows);
    }
}
