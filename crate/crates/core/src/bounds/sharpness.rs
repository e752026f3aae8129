use rand::RngCore;

use super::{BoundsError, Condition, ConditionReport};
use crate::problem::Problem;
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Points closer than this to the optimal set are skipped.
const NEAR_OPT: f64 = 1e-6;
/// Radii of the probes placed between each sample and its nearest optimum.
const RAY_MID: f64 = 1e-2;
const RAY_NEAR: f64 = 1e-5;

/// Estimates the gradient condition constant
/// `kappa_hat = min_x grad l(x)^T (x - x*) / |x - x*|` over `n_samples`
/// feasible points, together with the sharpness form
/// `min_x (l(x) - l*) / |x - x*|` as `secondary`.
///
/// Each sample farther than `1e-2` from the optimal set also contributes two
/// probes on the segment to its nearest optimum, at distances `1e-2` and
/// `1e-5`. The check passes when `kappa_hat > 0`, the directional derivative
/// does not drop by more than half between the two probes (a smooth minimum
/// shrinks it linearly), and every point satisfies
/// `l(x) - l* >= (kappa_hat / 2) |x - x*|` up to the projection tolerance.
pub fn check_sharpness<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    n_samples: usize,
    rng: &mut dyn RngCore,
) -> Result<ConditionReport, BoundsError> {
    if !problem.optimum().is_known() {
        return Err(BoundsError::NoOptimum);
    }
    let f_star = problem.opt_value().ok_or(BoundsError::NoOptimum)?.as_f64();

    let probe = |x: &Vector<T>| -> Result<Option<(f64, f64, f64)>, BoundsError> {
        let x_star = problem.optimum().nearest(x).ok_or(BoundsError::NoOptimum)?;
        let d: Vector<T> = x - &x_star;
        let dist = d.norm().as_f64();
        if !(dist > NEAR_OPT) {
            return Ok(None);
        }
        let g = problem.grad(x).ok_or(BoundsError::NoGradient)?;
        let dir = g.dot(&d).as_f64() / dist;
        let gap = problem.objective(x).as_f64() - f_star;
        Ok(Some((dist, dir, gap)))
    };

    // (dist, directional derivative, gap) per accepted point
    let mut rows: Vec<(f64, f64, f64)> = Vec::with_capacity(n_samples);
    let mut decays = false;
    let mut tries = 0usize;
    while rows.len() < n_samples {
        tries += 1;
        if tries > 100 * n_samples.max(1) {
            break;
        }
        let Some(x) = problem.sample_feasible(rng) else { return Err(BoundsError::NoSamples) };
        let Some(row) = probe(&x)? else { continue };
        rows.push(row);
        if row.0 > RAY_MID {
            // walk toward the optimum along the segment, which stays feasible
            let x_star = problem.optimum().nearest(&x).ok_or(BoundsError::NoOptimum)?;
            let u = (&x - &x_star).scale(T::one() / T::c(row.0));
            let at = |r: f64| &x_star + &u.scale(T::c(r));
            let mid = probe(&at(RAY_MID))?;
            let near = probe(&at(RAY_NEAR))?;
            if let (Some(mid), Some(near)) = (mid, near) {
                decays |= mid.1 > 0.0 && near.1 < 0.5 * mid.1;
                rows.push(mid);
                rows.push(near);
            }
        }
    }
    if rows.is_empty() {
        return Err(BoundsError::NoSamples);
    }

    let kappa = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    let sharp = rows.iter().map(|r| r.2 / r.0).fold(f64::INFINITY, f64::min);
    let tol = T::PROJ_TOL.sqrt();
    let consistent = rows.iter().all(|&(dist, _, gap)| gap >= 0.5 * kappa * dist - tol * (1.0 + dist));
    Ok(ConditionReport {
        condition: Condition::D1,
        estimate: kappa,
        std_error: None,
        threshold: 0.0,
        secondary: Some(sharp),
        n_samples: rows.len(),
        passed: kappa > 0.0 && consistent && !decays,
    })
}

/// Angle constant `K = a / D` bounding
/// `c^T (x - x*) / (|c| |x - x*|)` from below on a polytope given by its
/// vertices, with `a` the smallest normalized excess cost of a suboptimal
/// vertex and `D` the largest distance between an optimal and a suboptimal
/// vertex.
pub fn polytope_sharpness_k(vertices: &[Vec<f64>], c_bar: &[f64]) -> Result<f64, BoundsError> {
    if vertices.is_empty() {
        return Err(BoundsError::OutOfRange { name: "vertices", value: 0.0, reason: "need at least one vertex" });
    }
    let norm = c_bar.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(BoundsError::AllOptimal);
    }
    let value = |v: &[f64]| v.iter().zip(c_bar).map(|(x, c)| x * c).sum::<f64>() / norm;
    let values: Vec<f64> = vertices.iter().map(|v| value(v)).collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);

    let (mut opt, mut sub) = (Vec::new(), Vec::new());
    for (v, &val) in vertices.iter().zip(&values) {
        if val - best <= 1e-9 {
            opt.push(v);
        } else {
            sub.push((v, val - best));
        }
    }
    if sub.is_empty() {
        return Err(BoundsError::AllOptimal);
    }
    let a = sub.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let mut d = 0.0f64;
    for o in &opt {
        for (s, _) in &sub {
            let dd = o.iter().zip(s.iter()).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
            d = d.max(dd);
        }
    }
    Ok(a / d)
}
