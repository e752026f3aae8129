//! Per-iteration records produced by the algorithm drivers.

use crate::scalar::Scalar;
use crate::vector::Vector;

/// One recorded iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct Record<T> {
    pub t: usize,
    /// Step size `alpha_t` used to leave this iterate.
    pub alpha: T,
    pub x: Option<Vector<T>>,
    /// `l(x_t) - min l`, from the exact objective.
    pub gap: Option<T>,
    /// Distance to the optimal set.
    pub dist: Option<T>,
    /// Whether the step that produced `x_t` needed a non-trivial projection.
    pub nontrivial: bool,
}

/// Which iterations get a [`Record`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Thinning {
    Every,
    /// Every step below `dense_until`, then checkpoints spaced by `ratio`.
    Geometric { dense_until: usize, ratio: f64 },
}

impl Default for Thinning {
    fn default() -> Self {
        Thinning::Geometric { dense_until: 1000, ratio: 1.1 }
    }
}

/// Stateful checkpoint selector for a [`Thinning`] policy.
#[derive(Debug, Clone)]
pub struct Checkpoints {
    policy: Thinning,
    next: f64,
}

impl Checkpoints {
    pub fn new(policy: Thinning) -> Self {
        let next = match policy {
            Thinning::Every => 0.0,
            Thinning::Geometric { dense_until, .. } => dense_until as f64,
        };
        Self { policy, next }
    }

    /// Call once per `t`, in increasing order.
    pub fn hit(&mut self, t: usize) -> bool {
        match self.policy {
            Thinning::Every => true,
            Thinning::Geometric { dense_until, ratio } => {
                if t < dense_until {
                    return true;
                }
                if t as f64 >= self.next {
                    self.next = (self.next * ratio).max(t as f64 + 1.0);
                    true
                } else {
                    false
                }
            }
        }
    }
}

/// Output of one algorithm run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub records: Vec<Record<T>>,
    pub final_iterate: Vector<T>,
    /// Number of steps taken.
    pub iterations: usize,
    /// Steps whose pre-projection point left the feasible set.
    pub nontrivial_projections: usize,
    pub last_nontrivial: Option<usize>,
    /// Degenerate-distribution repairs (bandit runs only).
    pub clipped: usize,
}

impl<T: Scalar> Trajectory<T> {
    pub fn new(x0: Vector<T>) -> Self {
        Self {
            records: Vec::new(),
            final_iterate: x0,
            iterations: 0,
            nontrivial_projections: 0,
            last_nontrivial: None,
            clipped: 0,
        }
    }

    pub fn last(&self) -> Option<&Record<T>> {
        self.records.last()
    }

    /// Record at exactly step `t`, if it was kept.
    pub fn at(&self, t: usize) -> Option<&Record<T>> {
        self.records.binary_search_by_key(&t, |r| r.t).ok().map(|i| &self.records[i])
    }

    pub fn times(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.t).collect()
    }
}
