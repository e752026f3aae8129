mod common;

use common::{flat_control, interval, rng, Toy};
use proptest::prelude::*;
use rand::RngCore;
use rand_distr::{Distribution, StandardNormal};
use sharpsa::algorithms::{Algorithm, PsgdConfig};
use sharpsa::bounds::{
    bound_constants, check_drift, check_noise, check_sharpness, empirical_mgf, kw_bias_profile, lyapunov_range,
    polytope_sharpness_k, sample_uniform_mle, tail_bound, uniform_mle_tail, BoundPrimitives, BoundsError, DriftCheck,
    Lyapunov,
};
use sharpsa::problem::Problem;
use sharpsa::problems::{make_circle, make_lp2, make_reflected_1d, make_simplex_lp};
use sharpsa::schedule::StepSchedule;
use sharpsa::vector::Vector;

fn psgd_constant(alpha: f64, batch: usize) -> Algorithm<f64> {
    Algorithm::Psgd(PsgdConfig::new(StepSchedule::constant(alpha).unwrap(), batch))
}

fn vertices_f64(p: &sharpsa::problems::LinearProblem<f64>) -> Vec<Vec<f64>> {
    p.vertices().iter().map(|v| v.to_f64()).collect()
}

#[test]
fn circle_sharpness_is_one() {
    let p = make_circle::<f64>();
    let rep = check_sharpness(&p, 2000, &mut rng(1)).unwrap();
    assert!((rep.estimate - 1.0).abs() <= 1e-12, "{rep}");
    assert!(rep.passed);
}

#[test]
fn square_on_interval_sharpness_is_two() {
    let p = Toy::new(interval(1.0, 2.0), |x| x[0] * x[0], |x| Vector::from_f64(&[2.0 * x[0]]), &[1.0]);
    let rep = check_sharpness(&p, 2000, &mut rng(2)).unwrap();
    // infimum of 2x over (1, 2]
    assert!(rep.estimate >= 2.0 && rep.estimate < 2.0 + 1e-3, "{rep}");
    assert!(rep.passed);
}

#[test]
fn smooth_interior_minimum_is_not_sharp() {
    let p = Toy::new(interval(-3.0, 3.0), |x| x[0] * x[0], |x| Vector::from_f64(&[2.0 * x[0]]), &[0.0]);
    let rep = check_sharpness(&p, 200, &mut rng(3)).unwrap();
    assert!(!rep.passed, "{rep}");
}

#[test]
fn sharpness_needs_gradient_and_optimum() {
    let mut p = Toy::new(interval(0.0, 1.0), |x| x[0], |_| Vector::from_f64(&[1.0]), &[0.0]);
    p.optimum = sharpsa::problem::OptimumInfo::Unknown;
    assert_eq!(check_sharpness(&p, 10, &mut rng(4)), Err(BoundsError::NoOptimum));
}

#[test]
fn simplex_lp_sharpness_dominates_polytope_constant() {
    let p = make_simplex_lp::<f64>(50);
    let c = p.cost.to_f64();
    let k = polytope_sharpness_k(&vertices_f64(&p), &c).unwrap();
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rep = check_sharpness(&p, 2000, &mut rng(5)).unwrap();
    assert!(rep.passed && rep.estimate > 0.0);
    assert!(rep.estimate >= k * norm - 1e-9, "kappa_hat {} < K |c| = {}", rep.estimate, k * norm);
}

#[test]
fn lp2_polytope_constant() {
    let p = make_lp2::<f64>();
    let c = p.cost.to_f64();
    let k = polytope_sharpness_k(&vertices_f64(&p), &c).unwrap();
    assert!(k > 0.0);
    let norm = c.iter().map(|v| v * v).sum::<f64>().sqrt();
    let rep = check_sharpness(&p, 2000, &mut rng(6)).unwrap();
    assert!(rep.estimate >= k * norm - 1e-9, "kappa_hat {} < K |c| = {}", rep.estimate, k * norm);
}

#[test]
fn drift_holds_on_reflected_walk() {
    let p = make_reflected_1d::<f64>();
    let algo = psgd_constant(0.01, 1);
    let check = DriftCheck { lyapunov: Lyapunov::Distance, kappa: 1.0, b: 10.0, n_states: 20, n_inner: 10_000 };
    let rep = check_drift(&p, &algo, &mut |r: &mut dyn RngCore| p.sample_feasible(r), &check, &mut rng(7)).unwrap();
    assert!(rep.passed, "{rep}");
}

#[test]
fn drift_holds_on_circle() {
    let p = make_circle::<f64>();
    let kappa_hat = check_sharpness(&p, 500, &mut rng(8)).unwrap().estimate;
    let algo = psgd_constant(0.01, 10);
    let check =
        DriftCheck { lyapunov: Lyapunov::Distance, kappa: kappa_hat / 2.0, b: 10.0, n_states: 20, n_inner: 10_000 };
    let rep = check_drift(&p, &algo, &mut |r: &mut dyn RngCore| p.sample_feasible(r), &check, &mut rng(9)).unwrap();
    assert!(rep.passed, "{rep}");
    // the mean drift is about -1, comfortably below -kappa_hat / 2
    assert!(rep.secondary.unwrap() < -0.9, "{rep}");
}

#[test]
fn drift_fails_without_signal() {
    let p = flat_control(2, 1.0);
    let algo = psgd_constant(0.01, 1);
    let check = DriftCheck { lyapunov: Lyapunov::Distance, kappa: 0.1, b: 10.0, n_states: 20, n_inner: 10_000 };
    let rep = check_drift(&p, &algo, &mut |r: &mut dyn RngCore| p.sample_feasible(r), &check, &mut rng(10)).unwrap();
    assert!(!rep.passed, "{rep}");
    assert!(rep.secondary.unwrap() > -0.05, "{rep}");
}

#[test]
fn drift_reports_missing_states() {
    let p = make_circle::<f64>();
    let algo = psgd_constant(0.01, 1);
    // level alpha B = 100 exceeds every distance in the disc
    let check = DriftCheck { lyapunov: Lyapunov::Distance, kappa: 0.5, b: 1e4, n_states: 5, n_inner: 10 };
    let err = check_drift(&p, &algo, &mut |r: &mut dyn RngCore| p.sample_feasible(r), &check, &mut rng(11));
    assert_eq!(err, Err(BoundsError::InsufficientStates { wanted: 5, found: 0 }));
}

#[test]
fn noise_check_on_reflected_walk() {
    let p = make_reflected_1d::<f64>();
    let algo = psgd_constant(0.01, 1);
    let lambdas = [0.05, 0.1, 0.2, 0.4, 0.8];
    let rep = check_noise(
        &p,
        &algo,
        &mut |r: &mut dyn RngCore| p.sample_feasible(r),
        Lyapunov::Distance,
        1.0,
        &lambdas,
        20,
        2000,
        &mut rng(12),
    )
    .unwrap();
    assert!(rep.report.passed);
    let chosen = rep.chosen.unwrap();
    assert!(chosen.d > 1.0 && chosen.e > 0.0);
    assert!(rep.z_max > 0.5);
}

#[test]
fn circle_lyapunov_range_is_diameter() {
    let p = make_circle::<f64>();
    assert_eq!(lyapunov_range(&p, Lyapunov::Distance, 10, &mut rng(13)).unwrap(), 30.0);
    let gap = lyapunov_range(&p, Lyapunov::Gap, 200, &mut rng(14)).unwrap();
    // sampled estimate of the farthest distance from (7, 7), approached from below
    let exact = 15.0 + 98f64.sqrt();
    assert!(gap <= exact + 1e-9 && gap > exact - 1e-2, "{gap}");
}

/// `E[exp(|Z|)]` for standard normal `Z` by composite Simpson on [0, 40].
fn half_normal_mgf_at_one() -> f64 {
    let n = 200_000;
    let h = 40.0 / n as f64;
    let f = |z: f64| 2.0 * (z - 0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = f(0.0) + f(40.0);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn half_normal_mgf_matches_quadrature() {
    let mut r = rng(15);
    let z: Vec<f64> = (0..1_000_000)
        .map(|_| {
            let v: f64 = StandardNormal.sample(&mut r);
            v.abs()
        })
        .collect();
    let curve = empirical_mgf(&z, &[1.0]);
    let oracle = half_normal_mgf_at_one();
    // 2 e^{1/2} Phi(1) = 2.77428595767 from the error function
    assert!((oracle - 2.774_285_957_67).abs() < 1e-9, "{oracle}");
    assert!((curve[0].d - oracle).abs() <= 3.0 * curve[0].d_se, "{:?} vs {oracle}", curve[0]);
}

#[test]
fn uniform_mle_tail_by_simulation() {
    let (theta, n, reps) = (2.0, 500usize, 100_000);
    let mut r = rng(16);
    let draws: Vec<f64> = (0..reps).map(|_| sample_uniform_mle(theta, n, &mut r)).collect();
    for z in [0.5, 1.0, 2.0] {
        let (exact, limit) = uniform_mle_tail(theta, n as u64, z).unwrap();
        let emp = draws.iter().filter(|&&d| d > z).count() as f64 / reps as f64;
        assert!((emp - exact).abs() < 0.01, "z {z}: empirical {emp} exact {exact}");
        assert!((exact - limit).abs() < 1e-3);
    }
}

#[test]
fn kw_bias_is_second_order_on_circle() {
    let p = make_circle::<f64>();
    let mut r = rng(17);
    let points: Vec<Vector<f64>> = std::iter::repeat_with(|| p.sample_feasible(&mut r).unwrap())
        .filter(|x| p.dist_to_opt(x).unwrap() > 2.0)
        .take(10)
        .collect();
    let rep = kw_bias_profile(&p, &points, &[0.05, 0.1, 0.2, 0.4], &mut r).unwrap();
    assert!((1.8..=2.2).contains(&rep.slope), "{rep:?}");
    for (nu, b) in rep.nus.iter().zip(&rep.bias) {
        assert!(*b <= rep.c_hat * nu * nu * (1.0 + 1e-12));
    }
}

#[test]
fn kw_bias_vanishes_on_quadratics() {
    let p = Toy::new(interval(-3.0, 3.0), |x| x[0] * x[0] - x[0], |x| Vector::from_f64(&[2.0 * x[0] - 1.0]), &[0.5]);
    let points = vec![Vector::from_f64(&[-1.0]), Vector::from_f64(&[2.5])];
    let rep = kw_bias_profile(&p, &points, &[0.05, 0.1, 0.2, 0.4], &mut rng(18)).unwrap();
    assert!(rep.bias.iter().all(|&b| b < 1e-12), "{rep:?}");
}

/// Closed-form constant table evaluated independently of the library.
struct Oracle {
    g: f64,
    n: u32,
    q: f64,
    j: f64,
    h: f64,
    i: f64,
    k: f64,
    r: f64,
    t1: f64,
}

fn oracle(p: &BoundPrimitives, t0: u64) -> Oracle {
    let alpha0 = p.a / p.u.powf(p.gamma);
    let g = 4f64.powf(-p.gamma);
    let n = if p.gamma < 1.0 { 1 } else { 1 + ((alpha0 * p.b + p.f) / (p.a * 2f64.ln())).ceil() as u32 };
    let t1 = if p.gamma < 1.0 {
        p.u + 2f64.powf(1.0 + p.gamma) * (alpha0 * p.b + p.f) * p.u.powf(p.gamma) / p.a
    } else {
        p.u * 2f64.powi(n as i32)
    };
    let t2 = t1.max(t0 as f64);
    let q = if p.lambda < p.kappa / (2.0 * p.e) { p.lambda } else { p.kappa / (2.0 * p.e) };
    let j = q * g.powi(n as i32);
    let h = p.d * (p.kappa * j / 2.0).exp() / (1.0 - (-p.kappa * j / 2.0).exp());
    let alpha_t2 = p.a / (p.u + t2).powf(p.gamma);
    let i = (1.0 + h) * (q * g / (p.f / alpha_t2 - p.b)).exp();
    let r = 1.0 + p.d * (q * p.kappa / 2.0).exp() * (q * p.b).exp() / (1.0 - (-q * p.kappa / 2.0).exp());
    Oracle { g, n, q, j, h, i, k: i / j, r, t1 }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn constant_table_matches_closed_form(
        kappa in 0.05f64..5.0,
        lambda in 0.05f64..5.0,
        b in 0.1f64..20.0,
        f in 0.5f64..50.0,
        d in 1.0f64..10.0,
        e in 0.05f64..10.0,
        gamma in prop_oneof![Just(0.0), Just(1.0), 0.0f64..1.0],
        a in 0.01f64..2.0,
        u in 1.0f64..50.0,
    ) {
        let p = BoundPrimitives { kappa, lambda, b, f, d, e, gamma, a, u };
        match bound_constants(&p) {
            Ok(bc) => {
                let o = oracle(&p, bc.t0);
                prop_assert_eq!(bc.n, o.n);
                prop_assert!(close(bc.g, o.g));
                prop_assert!(close(bc.q, o.q));
                prop_assert!(close(bc.j, o.j));
                prop_assert!(close(bc.h, o.h));
                prop_assert!(close(bc.i, o.i));
                prop_assert!(close(bc.k, o.k));
                prop_assert!(close(bc.r, o.r));
                prop_assert!(close(bc.t1, o.t1));
                prop_assert!(close(bc.t2, o.t1.max(bc.t0 as f64)));
                // T0 by direct scan of the relative decrement
                let alpha = |s: f64| a / (u + s).powf(gamma);
                let rel = |s: f64| (alpha(s) - alpha(s + 1.0)) / alpha(s);
                let thr = kappa / (2.0 * b);
                prop_assert!(rel(bc.t0 as f64) < thr);
                if bc.t0 > 0 {
                    prop_assert!(rel((bc.t0 - 1) as f64) >= thr * (1.0 - 1e-9));
                }
                prop_assert!(tail_bound(&bc, bc.alpha(bc.t2), 0.0) <= 1.0);
            }
            Err(BoundsError::InvalidRegime(_)) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn tail_bound_is_monotone(z1 in 0.0f64..50.0, dz in 0.0f64..50.0, alpha in 1e-4f64..1.0) {
        let p = BoundPrimitives { kappa: 1.0, lambda: 0.5, b: 2.0, f: 20.0, d: 2.0, e: 1.0, gamma: 0.0, a: 0.01, u: 1.0 };
        let bc = bound_constants(&p).unwrap();
        let (b1, b2) = (tail_bound(&bc, alpha, z1), tail_bound(&bc, alpha, z1 + dz));
        prop_assert!(b2 <= b1 && (0.0..=1.0).contains(&b2));
    }
}
