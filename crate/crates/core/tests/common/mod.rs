#![allow(dead_code)]

use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use sharpsa::problem::{FeasibleSet, OptimumInfo, Problem};
use sharpsa::projections::ConvexPiece;
use sharpsa::rng::RngStream;
use sharpsa::vector::Vector;

pub fn rng(seed: u64) -> impl RngCore {
    RngStream::new(seed, 0).rng()
}

/// Small analytic problem: exact `f` and `grad` with additive Gaussian noise
/// on gradient samples and a shared Gaussian shift on function values.
pub struct Toy {
    pub set: ConvexPiece<f64>,
    pub f: fn(&Vector<f64>) -> f64,
    pub g: fn(&Vector<f64>) -> Vector<f64>,
    pub noise_sd: f64,
    pub optimum: OptimumInfo<f64>,
    pub opt_value: f64,
    pub start: Option<Vector<f64>>,
    pub sharpness: Option<f64>,
    pub curvature: Option<f64>,
}

impl Toy {
    pub fn new(set: ConvexPiece<f64>, f: fn(&Vector<f64>) -> f64, g: fn(&Vector<f64>) -> Vector<f64>, opt: &[f64]) -> Self {
        let x = Vector::from_f64(opt);
        Toy {
            set,
            f,
            g,
            noise_sd: 0.0,
            opt_value: f(&x),
            optimum: OptimumInfo::Point(x),
            start: None,
            sharpness: None,
            curvature: None,
        }
    }

    fn noise(&self, rng: &mut dyn RngCore) -> f64 {
        if self.noise_sd == 0.0 {
            0.0
        } else {
            let z: f64 = StandardNormal.sample(rng);
            self.noise_sd * z
        }
    }
}

impl Problem<f64> for Toy {
    fn name(&self) -> &str {
        "toy"
    }
    fn dim(&self) -> usize {
        self.set.dim()
    }
    fn objective(&self, x: &Vector<f64>) -> f64 {
        (self.f)(x)
    }
    fn grad(&self, x: &Vector<f64>) -> Option<Vector<f64>> {
        Some((self.g)(x))
    }
    fn sample_grad_once(&self, x: &Vector<f64>, rng: &mut dyn RngCore) -> Vector<f64> {
        let mut g = (self.g)(x);
        for v in g.as_mut_slice() {
            *v += self.noise(rng);
        }
        g
    }
    fn sample_values(&self, points: &[Vector<f64>], rng: &mut dyn RngCore) -> Vec<f64> {
        let w = self.noise(rng);
        points.iter().map(|p| (self.f)(p) + w).collect()
    }
    fn feasible(&self) -> &dyn FeasibleSet<f64> {
        &self.set
    }
    fn optimum(&self) -> &OptimumInfo<f64> {
        &self.optimum
    }
    fn opt_value(&self) -> Option<f64> {
        Some(self.opt_value)
    }
    fn initial_point(&self) -> Option<Vector<f64>> {
        self.start.clone()
    }
    fn sharpness(&self) -> Option<f64> {
        self.sharpness
    }
    fn kw_curvature(&self) -> Option<f64> {
        self.curvature
    }
}

pub fn interval(lo: f64, hi: f64) -> ConvexPiece<f64> {
    ConvexPiece::boxed(Vector::from_f64(&[lo]), Vector::from_f64(&[hi])).unwrap()
}

/// Zero mean objective with pure-noise gradients on a box: no drift toward
/// the declared reference point can exist.
pub fn flat_control(d: usize, noise_sd: f64) -> Toy {
    let set = ConvexPiece::boxed(Vector::filled(d, -1.0), Vector::filled(d, 1.0)).unwrap();
    let mut p = Toy::new(set, |_| 0.0, |x| Vector::zeros(x.dim()), &vec![0.0; d]);
    p.noise_sd = noise_sd;
    p
}
