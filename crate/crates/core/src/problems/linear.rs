use rand::RngCore;

use super::{gauss, gauss_vec};
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::projections::{ConvexPiece, Polytope, ProjectionError};
use crate::scalar::Scalar;
use crate::vector::Vector;

#[derive(Debug, Clone)]
enum LinearSet<T> {
    Polytope(Polytope<T>),
    Simplex(ConvexPiece<T>),
}

/// Linear program `min c^T x` over a polytope with costs observed through
/// `N(c, sigma^2 I)` samples.
#[derive(Debug, Clone)]
pub struct LinearProblem<T> {
    name: &'static str,
    set: LinearSet<T>,
    pub cost: Vector<T>,
    pub sigma: T,
    optimum: OptimumInfo<T>,
    opt_value: T,
    pub start: Option<Vector<T>>,
}

/// Vertices (counter-clockwise) of the two-variable polygon. Only the
/// optimum (2, 1) under costs (4, 6) is fixed by the benchmark; the other
/// vertices are a reconstruction.
pub fn lp2_vertices() -> Vec<[f64; 2]> {
    vec![[2.0, 1.0], [5.0, -0.8], [5.0, 4.0], [3.5, 5.0], [2.0, 4.0]]
}

/// Two-variable LP with mean costs (4, 6) and unique optimum (2, 1).
pub fn make_lp2<T: Scalar>() -> LinearProblem<T> {
    make_lp2_with(&lp2_vertices()).expect("built-in polygon is valid")
}

/// Two-variable LP with mean costs (4, 6) over a custom counter-clockwise
/// polygon. The optimum is the cheapest vertex, which must be unique.
pub fn make_lp2_with<T: Scalar>(vertices: &[[f64; 2]]) -> Result<LinearProblem<T>, ProjectionError> {
    let cost = Vector::from_f64(&[4.0, 6.0]);
    let vs: Vec<Vector<T>> = vertices.iter().map(|v| Vector::from_f64(v)).collect();
    let values: Vec<T> = vs.iter().map(|v| cost.dot(v)).collect();
    let best = (0..vs.len()).min_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite")).unwrap_or(0);
    if values.iter().enumerate().any(|(i, &v)| i != best && !(v > values[best])) {
        return Err(ProjectionError::InvalidSet("the cheapest vertex is not unique".into()));
    }
    let opt = vs[best].clone();
    let poly = Polytope::from_ccw_polygon(vs)?;
    let opt_value = cost.dot(&opt);
    Ok(LinearProblem {
        name: "lp2",
        set: LinearSet::Polytope(poly),
        cost,
        sigma: T::one(),
        optimum: OptimumInfo::Point(opt),
        opt_value,
        start: None,
    })
}

/// `min sum_i i p_i` over the probability simplex in dimension `n`.
pub fn make_simplex_lp<T: Scalar>(n: usize) -> LinearProblem<T> {
    assert!(n >= 1);
    let cost: Vector<T> = (1..=n).map(T::from_count).collect();
    LinearProblem {
        name: if n == 50 { "simplex50" } else { "simplex" },
        set: LinearSet::Simplex(ConvexPiece::simplex(n)),
        opt_value: cost[0],
        cost,
        sigma: T::one(),
        optimum: OptimumInfo::Point(Vector::unit(n, 0)),
        start: None,
    }
}

impl<T: Scalar> LinearProblem<T> {
    pub fn polytope(&self) -> Option<&Polytope<T>> {
        match &self.set {
            LinearSet::Polytope(p) => Some(p),
            LinearSet::Simplex(_) => None,
        }
    }

    /// Vertices of the feasible polytope.
    pub fn vertices(&self) -> Vec<Vector<T>> {
        match &self.set {
            LinearSet::Polytope(p) => p.vertices().to_vec(),
            LinearSet::Simplex(s) => (0..s.dim()).map(|i| Vector::unit(s.dim(), i)).collect(),
        }
    }
}

impl<T: Scalar> Problem<T> for LinearProblem<T> {
    fn name(&self) -> &str {
        self.name
    }

    fn dim(&self) -> usize {
        self.cost.dim()
    }

    fn objective(&self, x: &Vector<T>) -> T {
        self.cost.dot(x)
    }

    fn grad(&self, _x: &Vector<T>) -> Option<Vector<T>> {
        Some(self.cost.clone())
    }

    fn sample_grad_once(&self, _x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        &self.cost + &gauss_vec(self.cost.dim(), self.sigma, rng)
    }

    fn sample_grad_coord(&self, _x: &Vector<T>, i: usize, rng: &mut dyn RngCore) -> T {
        self.cost[i] + self.sigma * gauss::<T>(rng)
    }

    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T> {
        let w = self.sample_grad_once(&self.cost, rng);
        points.iter().map(|p| w.dot(p)).collect()
    }

    fn feasible(&self) -> &dyn FeasibleSet<T> {
        match &self.set {
            LinearSet::Polytope(p) => p,
            LinearSet::Simplex(s) => s,
        }
    }

    fn optimum(&self) -> &OptimumInfo<T> {
        &self.optimum
    }

    fn opt_value(&self) -> Option<T> {
        Some(self.opt_value)
    }

    fn initial_point(&self) -> Option<Vector<T>> {
        self.start.clone()
    }

    /// Linear objective: central differences are exact.
    fn kw_curvature(&self) -> Option<T> {
        Some(T::zero())
    }
}
