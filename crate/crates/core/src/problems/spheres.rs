use rand::RngCore;

use super::gauss_vec;
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::projections::{ConvexPiece, Intersection};
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Linear mean objective used on the three-ball intersection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpheresObjective {
    /// `c = (0, 1, -3 sqrt 3) / sqrt 28`: minus the sum of the three outward
    /// normals at the apex, so the apex is the unique and sharp minimizer.
    Apex,
    /// `-x_3`: the apex is the unique minimizer, but growth is quadratic
    /// along the ridge where two of the balls meet.
    Height,
    /// `-x_1`: minimized at (1, 0, 0).
    Literal,
}

impl SpheresObjective {
    fn cost(self) -> [f64; 3] {
        match self {
            SpheresObjective::Apex => {
                let n = 28f64.sqrt();
                [0.0, 1.0 / n, -3.0 * 3f64.sqrt() / n]
            }
            SpheresObjective::Height => [0.0, 0.0, -1.0],
            SpheresObjective::Literal => [-1.0, 0.0, 0.0],
        }
    }

    fn optimum(self) -> [f64; 3] {
        match self {
            SpheresObjective::Apex | SpheresObjective::Height => [0.0, 0.0, 3f64.sqrt()],
            SpheresObjective::Literal => [1.0, 0.0, 0.0],
        }
    }
}

/// Linear objective with Gaussian coefficient noise, `l(x, w) = (c + w)^T x`,
/// over the intersection of three radius-2 balls centred at (1,0,0),
/// (-1,0,0) and (0,1,0).
#[derive(Debug, Clone)]
pub struct ThreeSpheres<T> {
    pub set: Intersection<T>,
    pub cost: Vector<T>,
    pub variant: SpheresObjective,
    optimum: OptimumInfo<T>,
    opt_value: T,
    pub sigma: T,
    pub start: Option<Vector<T>>,
}

pub fn make_three_spheres<T: Scalar>(variant: SpheresObjective) -> ThreeSpheres<T> {
    let balls = [[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
        .iter()
        .map(|c| ConvexPiece::ball(Vector::from_f64(c), T::c(2.0)).expect("valid ball"))
        .collect();
    let set = Intersection::new(balls).expect("consistent dimensions");
    let cost = Vector::from_f64(&variant.cost());
    let opt = Vector::from_f64(&variant.optimum());
    let opt_value = cost.dot(&opt);
    ThreeSpheres {
        set,
        cost,
        variant,
        optimum: OptimumInfo::Point(opt),
        opt_value,
        sigma: T::one(),
        start: None,
    }
}

impl<T: Scalar> Problem<T> for ThreeSpheres<T> {
    fn name(&self) -> &str {
        "three-spheres"
    }

    fn dim(&self) -> usize {
        3
    }

    fn objective(&self, x: &Vector<T>) -> T {
        self.cost.dot(x)
    }

    fn grad(&self, _x: &Vector<T>) -> Option<Vector<T>> {
        Some(self.cost.clone())
    }

    fn sample_grad_once(&self, _x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        &self.cost + &gauss_vec(3, self.sigma, rng)
    }

    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T> {
        let w = &self.cost + &gauss_vec(3, self.sigma, rng);
        points.iter().map(|p| w.dot(p)).collect()
    }

    fn feasible(&self) -> &dyn FeasibleSet<T> {
        &self.set
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
}
