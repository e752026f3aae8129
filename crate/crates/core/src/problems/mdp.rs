use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma};
use thiserror::Error;

use super::gauss;
use crate::linalg::SparseCols;
use crate::problem::{FeasibleSet, OptimumInfo, Problem};
use crate::projections::{AffineNonnegSet, ProjectionError};
use crate::scalar::Scalar;
use crate::vector::Vector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MdpError {
    #[error("row ({state}, {action}) sums to {sum} instead of 1")]
    NotStochastic { state: usize, action: usize, sum: f64 },
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("the dual constraints admit no nonnegative solution (residual {0:e})")]
    InfeasibleDual(f64),
    #[error("value iteration did not converge")]
    NoConvergence,
    #[error(transparent)]
    Projection(#[from] ProjectionError),
}

/// Finite MDP with known dynamics and sampled costs. Pairs are indexed
/// `k = s * n_actions + a`; `terminal[k]` is the probability of leaving the
/// state space, so each row of `p` plus `terminal` sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MdpModel {
    pub n_states: usize,
    pub n_actions: usize,
    /// Sparse `P(s' | s, a)` per pair.
    pub p: Vec<Vec<(usize, f64)>>,
    pub terminal: Vec<f64>,
    pub cost_mean: Vec<f64>,
    /// Standard deviation of the Gaussian cost samples.
    pub cost_sd: f64,
    pub beta: f64,
    pub xi: Vec<f64>,
    /// Sampling distribution over pairs.
    pub pi: Vec<f64>,
    /// Cost samples averaged per gradient estimate.
    pub batch: usize,
}

impl MdpModel {
    pub fn n_pairs(&self) -> usize {
        self.n_states * self.n_actions
    }

    pub fn pair(&self, s: usize, a: usize) -> usize {
        s * self.n_actions + a
    }

    pub fn row_sum(&self, k: usize) -> f64 {
        self.p[k].iter().map(|&(_, q)| q).sum::<f64>() + self.terminal[k]
    }

    pub fn validate(&self) -> Result<(), MdpError> {
        let n = self.n_pairs();
        if self.p.len() != n || self.terminal.len() != n || self.cost_mean.len() != n || self.pi.len() != n {
            return Err(MdpError::Invalid("table sizes disagree with states x actions".into()));
        }
        if self.xi.len() != self.n_states || self.xi.iter().any(|&x| !(x > 0.0)) {
            return Err(MdpError::Invalid("source weights must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(MdpError::Invalid(format!("discount {} outside [0, 1]", self.beta)));
        }
        if self.pi.iter().any(|&q| !(q > 0.0)) || (self.pi.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(MdpError::Invalid("sampling distribution must be positive and sum to 1".into()));
        }
        for k in 0..n {
            let sum = self.row_sum(k);
            if (sum - 1.0).abs() > 1e-12 || self.p[k].iter().any(|&(s, q)| s >= self.n_states || q < 0.0) {
                return Err(MdpError::NotStochastic { state: k / self.n_actions, action: k % self.n_actions, sum });
            }
        }
        Ok(())
    }

    /// Optimal state values by value iteration to `tol`.
    pub fn optimal_values(&self, tol: f64) -> Result<Vec<f64>, MdpError> {
        let mut v = vec![0.0; self.n_states];
        for _ in 0..1_000_000 {
            let next: Vec<f64> = (0..self.n_states)
                .map(|s| (0..self.n_actions).map(|a| self.q_value(&v, s, a)).fold(f64::INFINITY, f64::min))
                .collect();
            let change = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = next;
            if change < tol {
                return Ok(v);
            }
        }
        Err(MdpError::NoConvergence)
    }

    pub fn q_value(&self, v: &[f64], s: usize, a: usize) -> f64 {
        let k = self.pair(s, a);
        self.cost_mean[k] + self.beta * self.p[k].iter().map(|&(t, q)| q * v[t]).sum::<f64>()
    }

    /// Occupancy measure `x(s, a)` of a stationary randomized policy
    /// (`policy[k]` = probability of action `a` in state `s`).
    pub fn occupancy(&self, policy: &[f64]) -> Result<Vec<f64>, MdpError> {
        let ns = self.n_states;
        let mut d = self.xi.clone();
        for _ in 0..1_000_000 {
            let mut next = self.xi.clone();
            for s in 0..ns {
                for a in 0..self.n_actions {
                    let k = self.pair(s, a);
                    let w = self.beta * d[s] * policy[k];
                    if w != 0.0 {
                        for &(t, q) in &self.p[k] {
                            next[t] += w * q;
                        }
                    }
                }
            }
            let change = next.iter().zip(&d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            d = next;
            if !d.iter().all(|v| v.is_finite()) {
                break;
            }
            if change <= 1e-15 * d.iter().fold(1.0, |m, &v| f64::max(m, v)) {
                return Ok((0..self.n_pairs()).map(|k| d[k / self.n_actions] * policy[k]).collect());
            }
        }
        Err(MdpError::NoConvergence)
    }

    pub fn uniform_policy(&self) -> Vec<f64> {
        vec![1.0 / self.n_actions as f64; self.n_pairs()]
    }

    /// Rows of the dual constraints `sum_a x(s',a) - beta sum P(s'|s,a) x(s,a) = xi(s')`.
    pub fn constraint_matrix(&self) -> SparseCols<f64> {
        let cols = (0..self.n_pairs())
            .map(|k| {
                let s = k / self.n_actions;
                let mut col: Vec<(usize, f64)> = vec![(s, 1.0)];
                for &(t, q) in &self.p[k] {
                    let v = -self.beta * q;
                    match col.iter_mut().find(|(i, _)| *i == t) {
                        Some(e) => e.1 += v,
                        None => col.push((t, v)),
                    }
                }
                col.retain(|&(_, v)| v != 0.0);
                col
            })
            .collect();
        SparseCols { rows: self.n_states, cols }
    }
}

/// Three states on a cycle, two actions (anticlockwise, clockwise). The
/// intended neighbour is reached with probability 2/3; otherwise the next
/// state is uniform over all three (so the intended one gets 7/9 in total).
/// Mean cost `i` in state `s_i`, `xi = 1/3`, discount 0.2, uniform sampling
/// over the six pairs, batch 200.
pub fn make_mdp_3state() -> MdpModel {
    let (ns, na) = (3, 2);
    let mut p = Vec::new();
    let mut cost_mean = Vec::new();
    for s in 0..ns {
        for a in 0..na {
            let target = if a == 0 { (s + 1) % ns } else { (s + ns - 1) % ns };
            let row = (0..ns).map(|t| (t, if t == target { 7.0 / 9.0 } else { 1.0 / 9.0 })).collect();
            p.push(row);
            cost_mean.push((s + 1) as f64);
        }
    }
    MdpModel {
        n_states: ns,
        n_actions: na,
        p,
        terminal: vec![0.0; ns * na],
        cost_mean,
        cost_sd: 1.0,
        beta: 0.2,
        xi: vec![1.0 / 3.0; ns],
        pi: vec![1.0 / 6.0; ns * na],
        batch: 200,
    }
}

/// The dual (occupancy-measure) linear program of an MDP.
#[derive(Debug, Clone)]
pub struct MdpDual<T> {
    pub model: MdpModel,
    set: AffineNonnegSet<T>,
    /// Same constraints restricted to optimal pairs.
    face: AffineNonnegSet<T>,
    optimal_pairs: Vec<bool>,
    cost: Vector<T>,
    optimum: OptimumInfo<T>,
    opt_value: T,
    pi_cdf: Vec<f64>,
    pub start: Vector<T>,
    name: &'static str,
}

fn to_t<T: Scalar>(a: &SparseCols<f64>) -> SparseCols<T> {
    SparseCols {
        rows: a.rows,
        cols: a.cols.iter().map(|c| c.iter().map(|&(i, v)| (i, T::c(v))).collect()).collect(),
    }
}

/// Builds the dual problem; the optimal value comes from value iteration
/// and the start point is the occupancy measure of the uniform policy.
pub fn make_mdp_dual<T: Scalar>(model: MdpModel) -> Result<MdpDual<T>, MdpError> {
    model.validate()?;
    let n = model.n_pairs();
    let a64 = model.constraint_matrix();
    let b: Vec<T> = model.xi.iter().map(|&v| T::c(v)).collect();
    let set = AffineNonnegSet::new(to_t(&a64), b.clone())?;

    let v = model.optimal_values(1e-13)?;
    let opt_value = model.xi.iter().zip(&v).map(|(x, v)| x * v).sum::<f64>();
    let scale = v.iter().fold(1.0, |m, &x| f64::max(m, x.abs()));
    let optimal_pairs: Vec<bool> = (0..n)
        .map(|k| {
            let (s, a) = (k / model.n_actions, k % model.n_actions);
            model.q_value(&v, s, a) <= v[s] + 1e-9 * scale
        })
        .collect();
    let face_cols = to_t::<T>(&a64)
        .cols
        .into_iter()
        .zip(&optimal_pairs)
        .filter(|(_, &o)| o)
        .map(|(c, _)| c)
        .collect();
    let face = AffineNonnegSet::new(SparseCols { rows: model.n_states, cols: face_cols }, b)?;

    let start64 = model.occupancy(&model.uniform_policy())?;
    let start: Vector<T> = start64.iter().map(|&v| T::c(v)).collect();
    let residual = set.residual(&start).as_f64();
    if !(residual < 1e-8) {
        return Err(MdpError::InfeasibleDual(residual));
    }

    let cost: Vector<T> = model.cost_mean.iter().map(|&c| T::c(c)).collect();
    let mut pi_cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for &q in &model.pi {
        acc += q;
        pi_cdf.push(acc);
    }

    let name = if model.n_states == 3 { "mdp3" } else if model.n_states == 290 { "blackjack" } else { "mdp" };
    let mut dual = MdpDual {
        model,
        set,
        face,
        optimal_pairs,
        cost,
        optimum: OptimumInfo::Unknown,
        opt_value: T::c(opt_value),
        pi_cdf,
        start,
        name,
    };
    let (face, mask) = (dual.face.clone(), dual.optimal_pairs.clone());
    dual.optimum = OptimumInfo::oracle(move |x: &Vector<T>| project_onto_face(&face, &mask, x));
    Ok(dual)
}

/// Nearest optimal occupancy measure: suboptimal pairs are zero on the
/// optimal face, the rest is projected onto the restricted constraints.
fn project_onto_face<T: Scalar>(face: &AffineNonnegSet<T>, mask: &[bool], x: &Vector<T>) -> Vector<T> {
    let sub: Vector<T> = x.iter().zip(mask).filter(|(_, &o)| o).map(|(&v, _)| v).collect();
    let proj = face.project(&sub).unwrap_or_else(|_| Vector::filled(sub.dim(), T::nan()));
    let mut out = Vector::zeros(x.dim());
    let mut it = proj.iter();
    for (k, &o) in mask.iter().enumerate() {
        if o {
            out[k] = *it.next().expect("matching length");
        }
    }
    out
}

impl<T: Scalar> MdpDual<T> {
    pub fn optimal_pairs(&self) -> &[bool] {
        &self.optimal_pairs
    }

    pub fn dual_set(&self) -> &AffineNonnegSet<T> {
        &self.set
    }

    fn draw_pair(&self, rng: &mut dyn RngCore) -> usize {
        let u: f64 = rng.random();
        self.pi_cdf.partition_point(|&c| c <= u).min(self.pi_cdf.len() - 1)
    }

    /// Occupancy of a random policy with Dirichlet(1) action weights.
    pub fn random_occupancy(&self, rng: &mut dyn RngCore) -> Option<Vector<T>> {
        let na = self.model.n_actions;
        let gamma = Gamma::new(1.0, 1.0).ok()?;
        let mut policy = Vec::with_capacity(self.model.n_pairs());
        for _ in 0..self.model.n_states {
            let w: Vec<f64> = (0..na).map(|_| gamma.sample(rng)).collect();
            let s: f64 = w.iter().sum();
            policy.extend(w.iter().map(|v| v / s));
        }
        let x = self.model.occupancy(&policy).ok()?;
        Some(x.iter().map(|&v| T::c(v)).collect())
    }
}

impl<T: Scalar> Problem<T> for MdpDual<T> {
    fn name(&self) -> &str {
        self.name
    }

    fn dim(&self) -> usize {
        self.model.n_pairs()
    }

    fn objective(&self, x: &Vector<T>) -> T {
        self.cost.dot(x)
    }

    fn grad(&self, _x: &Vector<T>) -> Option<Vector<T>> {
        Some(self.cost.clone())
    }

    /// Importance-sampled cost: one pair `(s, a) ~ pi`, cost `c_hat / pi`.
    fn sample_grad_once(&self, _x: &Vector<T>, rng: &mut dyn RngCore) -> Vector<T> {
        let mut g = Vector::zeros(self.dim());
        let k = self.draw_pair(rng);
        let c = T::c(self.model.cost_mean[k]) + T::c(self.model.cost_sd) * gauss::<T>(rng);
        g[k] = c / T::c(self.model.pi[k]);
        g
    }

    fn sample_grad(&self, _x: &Vector<T>, rng: &mut dyn RngCore, batch: usize) -> Vector<T> {
        let batch = batch.max(1);
        let mut g = Vector::zeros(self.dim());
        let inv_b = T::one() / T::from_count(batch);
        for _ in 0..batch {
            let k = self.draw_pair(rng);
            let c = T::c(self.model.cost_mean[k]) + T::c(self.model.cost_sd) * gauss::<T>(rng);
            g[k] += c / T::c(self.model.pi[k]) * inv_b;
        }
        g
    }

    fn sample_values(&self, points: &[Vector<T>], rng: &mut dyn RngCore) -> Vec<T> {
        let c: Vector<T> = self
            .model
            .cost_mean
            .iter()
            .map(|&m| T::c(m) + T::c(self.model.cost_sd) * gauss::<T>(rng))
            .collect();
        points.iter().map(|p| c.dot(p)).collect()
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
        Some(self.start.clone())
    }

    fn sample_feasible(&self, rng: &mut dyn RngCore) -> Option<Vector<T>> {
        self.random_occupancy(rng)
    }

    fn kw_curvature(&self) -> Option<T> {
        Some(T::zero())
    }
}
