//! Dense real vectors.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// A point or direction in `R^d`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Vector<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Vector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn zeros(d: usize) -> Self {
        Self { coords: vec![T::zero(); d] }
    }

    pub fn filled(d: usize, value: T) -> Self {
        Self { coords: vec![value; d] }
    }

    /// The `i`-th standard basis vector of `R^d`.
    pub fn unit(d: usize, i: usize) -> Self {
        let mut v = Self::zeros(d);
        v.coords[i] = T::one();
        v
    }

    pub fn from_f64(xs: &[f64]) -> Self {
        Self { coords: xs.iter().map(|&x| T::c(x)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.coords
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.coords
    }

    pub fn into_inner(self) -> Vec<T> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.coords.iter()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(|x| x.as_f64()).collect()
    }

    pub fn dot(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords.iter().zip(&other.coords).map(|(&a, &b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Self) -> T {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum::<T>()
            .sqrt()
    }

    pub fn sum(&self) -> T {
        self.coords.iter().copied().sum()
    }

    pub fn max_abs(&self) -> T {
        self.coords.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn scale(&self, k: T) -> Self {
        Self { coords: self.coords.iter().map(|&x| x * k).collect() }
    }

    pub fn scale_mut(&mut self, k: T) {
        self.coords.iter_mut().for_each(|x| *x *= k);
    }

    /// `self += k * other`
    pub fn axpy(&mut self, k: T, other: &Self) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, &b) in self.coords.iter_mut().zip(&other.coords) {
            *a += k * b;
        }
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { coords: self.coords.iter().map(|&x| f(x)).collect() }
    }

    /// No NaN or infinite coordinate.
    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|x| x.is_finite())
    }

    /// Convex combination `(1 - w) * self + w * other`.
    pub fn lerp(&self, other: &Self, w: T) -> Self {
        let one_m = T::one() - w;
        Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| one_m * a + w * b)
                .collect(),
        }
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(coords: Vec<T>) -> Self {
        Self { coords }
    }
}

impl<T> FromIterator<T> for Vector<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Self { coords: iter.into_iter().collect() }
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

impl<T> IndexMut<usize> for Vector<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.coords[i]
    }
}

impl<T: Scalar> Add for &Vector<T> {
    type Output = Vector<T>;
    fn add(self, rhs: Self) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector::new(self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| a + b).collect())
    }
}

impl<T: Scalar> Sub for &Vector<T> {
    type Output = Vector<T>;
    fn sub(self, rhs: Self) -> Vector<T> {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector::new(self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| a - b).collect())
    }
}

impl<T: Scalar> Mul<T> for &Vector<T> {
    type Output = Vector<T>;
    fn mul(self, k: T) -> Vector<T> {
        self.scale(k)
    }
}

impl<T: Scalar> Neg for &Vector<T> {
    type Output = Vector<T>;
    fn neg(self) -> Vector<T> {
        self.map(|x| -x)
    }
}
