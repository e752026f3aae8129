use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sharpsa::problems::{make_lp2, make_mdp_3state, make_mdp_dual, make_three_spheres, SpheresObjective};
use sharpsa::projections::{
    project_affine_nonneg, project_intersection, project_piece, project_simplex, ConvexPiece, Intersection,
};
use sharpsa::{FeasibleSet, Problem, Vector};

type V = Vector<f64>;

fn v(xs: &[f64]) -> V {
    Vector::from_f64(xs)
}

fn check_operator(set: &dyn FeasibleSet<f64>, x: &V, y: &V, tol: f64) -> Result<(), TestCaseError> {
    let px = set.project(x).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let py = set.project(y).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(set.contains_tol(&px, tol.max(1e-9) * 10.0), "projection not feasible: {:?}", px);
    let ppx = set.project(&px).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(ppx.dist(&px) <= 2.0 * tol, "idempotence off by {}", ppx.dist(&px));
    prop_assert!(
        px.dist(&py) <= x.dist(y) + 4.0 * tol,
        "expansive: {} > {}",
        px.dist(&py),
        x.dist(y)
    );
    Ok(())
}

fn cube(d: usize) -> impl Strategy<Value = V> {
    prop::collection::vec(-20.0..20.0f64, d).prop_map(Vector::new)
}

fn pair(d: usize) -> impl Strategy<Value = (V, V)> {
    (cube(d), cube(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn box_operator((x, y) in pair(3)) {
        let set = ConvexPiece::boxed(v(&[-1.0, 0.0, 2.0]), v(&[1.0, 3.0, 2.5])).unwrap();
        check_operator(&set, &x, &y, 1e-12)?;
    }

    #[test]
    fn ball_operator((x, y) in pair(3)) {
        let set = ConvexPiece::ball(v(&[1.0, -2.0, 0.5]), 3.0).unwrap();
        check_operator(&set, &x, &y, 1e-12)?;
    }

    #[test]
    fn halfspace_operator((x, y) in pair(3)) {
        let set = ConvexPiece::halfspace(v(&[1.0, 2.0, -1.0]), 0.5).unwrap();
        check_operator(&set, &x, &y, 1e-12)?;
    }

    #[test]
    fn affine_operator((x, y) in pair(3)) {
        let set = ConvexPiece::affine_eq(vec![v(&[1.0, 1.0, 1.0]), v(&[1.0, -1.0, 0.0])], vec![1.0, 0.5]).unwrap();
        check_operator(&set, &x, &y, 1e-12)?;
    }

    #[test]
    fn simplex_operator((x, y) in pair(4)) {
        check_operator(&ConvexPiece::simplex(4), &x, &y, 1e-12)?;
    }

    #[test]
    fn orthant_operator((x, y) in pair(3)) {
        check_operator(&ConvexPiece::nonneg(3), &x, &y, 0.0)?;
    }

    #[test]
    fn orthant_ball_intersection((x, y) in pair(2)) {
        let set = Intersection::new(vec![
            ConvexPiece::nonneg(2),
            ConvexPiece::ball(Vector::zeros(2), 0.9f64.sqrt()).unwrap(),
        ])
        .unwrap();
        check_operator(&set, &x, &y, 1e-9)?;
    }

    #[test]
    fn three_spheres_intersection((x, y) in pair(3)) {
        let p = make_three_spheres::<f64>(SpheresObjective::Apex);
        check_operator(p.feasible(), &x, &y, 1e-8)?;
    }

    #[test]
    fn lp2_polytope((x, y) in pair(2)) {
        let p = make_lp2::<f64>();
        check_operator(p.feasible(), &x, &y, 1e-8)?;
    }

    #[test]
    fn mdp_dual_polytope((x, y) in (prop::collection::vec(-2.0..2.0f64, 6), prop::collection::vec(-2.0..2.0f64, 6))) {
        let p = make_mdp_dual::<f64>(make_mdp_3state()).unwrap();
        check_operator(p.feasible(), &Vector::new(x), &Vector::new(y), 1e-8)?;
    }

    #[test]
    fn simplex_preserves_order(x in cube(6)) {
        let p = project_simplex(&x);
        for i in 0..6 {
            for j in 0..6 {
                if x[i] >= x[j] {
                    prop_assert!(p[i] >= p[j]);
                }
            }
        }
        prop_assert!((p.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(p.iter().all(|&c| c >= 0.0));
    }
}

/// Nearest point of the probability simplex in 3-d by enumerating the seven
/// possible supports.
fn simplex_brute_force(x: &[f64; 3]) -> [f64; 3] {
    let mut best: Option<([f64; 3], f64)> = None;
    for mask in 1u8..8 {
        let support: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        let tau = (support.iter().map(|&i| x[i]).sum::<f64>() - 1.0) / support.len() as f64;
        let mut p = [0.0; 3];
        for &i in &support {
            p[i] = x[i] - tau;
        }
        if p.iter().any(|&c| c < 0.0) {
            continue;
        }
        let d: f64 = (0..3).map(|i| (p[i] - x[i]).powi(2)).sum();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((p, d));
        }
    }
    best.expect("some support is feasible").0
}

#[test]
fn simplex_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..100 {
        let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let want = simplex_brute_force(&x);
        let got = project_simplex(&v(&x));
        for i in 0..3 {
            assert!((got[i] - want[i]).abs() <= 1e-9, "{x:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn simplex_fixed_examples() {
    assert_eq!(project_simplex(&v(&[1.0, 0.0, 0.0])).to_f64(), vec![1.0, 0.0, 0.0]);
    let p = project_simplex(&v(&[0.5, 0.5, 0.5]));
    for c in p.iter() {
        assert!((c - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[test]
fn piece_examples() {
    let ball = ConvexPiece::ball(Vector::zeros(2), 15.0).unwrap();
    assert_eq!(project_piece(&ball, &v(&[30.0, 0.0])).unwrap().to_f64(), vec![15.0, 0.0]);
    let half = ConvexPiece::halfspace(v(&[1.0, 0.0]), 0.0).unwrap();
    assert_eq!(project_piece(&half, &v(&[2.0, 3.0])).unwrap().to_f64(), vec![0.0, 3.0]);
    let b = ConvexPiece::boxed(v(&[0.0, 0.0]), v(&[1.0, 1.0])).unwrap();
    assert_eq!(project_piece(&b, &v(&[0.3, 0.7])).unwrap().to_f64(), vec![0.3, 0.7]);
}

/// Closed-form projection onto two non-parallel halfspaces in the plane: the
/// nearest feasible point among `x`, its two single-halfspace projections and
/// the corner.
fn two_halfspaces_oracle(a1: [f64; 2], b1: f64, a2: [f64; 2], b2: f64, x: [f64; 2]) -> [f64; 2] {
    let dot = |a: [f64; 2], p: [f64; 2]| a[0] * p[0] + a[1] * p[1];
    let onto = |a: [f64; 2], b: f64, p: [f64; 2]| {
        let s = (dot(a, p) - b).max(0.0) / dot(a, a);
        [p[0] - s * a[0], p[1] - s * a[1]]
    };
    let det = a1[0] * a2[1] - a1[1] * a2[0];
    let corner = [(b1 * a2[1] - b2 * a1[1]) / det, (a1[0] * b2 - a2[0] * b1) / det];
    let feasible = |p: [f64; 2]| dot(a1, p) <= b1 + 1e-12 && dot(a2, p) <= b2 + 1e-12;
    let mut best = corner;
    for c in [x, onto(a1, b1, x), onto(a2, b2, x)] {
        let d = |p: [f64; 2]| (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2);
        if feasible(c) && d(c) < d(best) {
            best = c;
        }
    }
    best
}

#[test]
fn dykstra_two_halfspaces_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a1: [f64; 2] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        let a2: [f64; 2] = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        if (a1[0] * a2[1] - a1[1] * a2[0]).abs() < 0.2 {
            continue;
        }
        let (b1, b2) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let x = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
        let set = Intersection::new(vec![
            ConvexPiece::halfspace(v(&a1), b1).unwrap(),
            ConvexPiece::halfspace(v(&a2), b2).unwrap(),
        ])
        .unwrap();
        let got = project_intersection(&set, &v(&x)).unwrap();
        let want = two_halfspaces_oracle(a1, b1, a2, b2, x);
        assert!(got.dist(&v(&want)) < 1e-7, "{got:?} vs {want:?}");
    }
}

/// Grid search on nested, shrinking windows.
fn grid_refine(feasible: impl Fn(f64, f64) -> bool, x: [f64; 2], mut lo: [f64; 2], mut hi: [f64; 2]) -> [f64; 2] {
    let n = 200;
    let mut best = [f64::NAN; 2];
    for _ in 0..8 {
        let mut bd = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=n {
                let p = [lo[0] + (hi[0] - lo[0]) * i as f64 / n as f64, lo[1] + (hi[1] - lo[1]) * j as f64 / n as f64];
                if feasible(p[0], p[1]) {
                    let d = (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2);
                    if d < bd {
                        bd = d;
                        best = p;
                    }
                }
            }
        }
        let w = [(hi[0] - lo[0]) / 10.0, (hi[1] - lo[1]) / 10.0];
        lo = [best[0] - w[0], best[1] - w[1]];
        hi = [best[0] + w[0], best[1] + w[1]];
    }
    best
}

#[test]
fn orthant_ball_matches_grid_oracle() {
    let r2: f64 = 0.9;
    let set = Intersection::new(vec![ConvexPiece::nonneg(2), ConvexPiece::ball(Vector::zeros(2), r2.sqrt()).unwrap()])
        .unwrap();
    for x in [[2.0, -1.0], [-0.5, 3.0], [0.4, 0.6], [-1.0, -1.0]] {
        let got = project_intersection(&set, &v(&x)).unwrap();
        let want = grid_refine(|a, b| a >= 0.0 && b >= 0.0 && a * a + b * b <= r2, x, [0.0, 0.0], [1.0, 1.0]);
        assert!(got.dist(&v(&want)) < 1e-6, "{x:?}: {got:?} vs {want:?}");
    }
}

#[test]
fn affine_nonneg_examples() {
    let rows = vec![v(&[1.0, 1.0])];
    let p = project_affine_nonneg(&rows, &[1.0], &v(&[2.0, 0.0])).unwrap();
    assert!(p.dist(&v(&[1.0, 0.0])) < 1e-9);
    let q = project_affine_nonneg(&rows, &[1.0], &v(&[0.25, 0.75])).unwrap();
    assert!(q.dist(&v(&[0.25, 0.75])) < 1e-12);
}

#[test]
fn mdp_dual_projection_residual() {
    let p = make_mdp_dual::<f64>(make_mdp_3state()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let x: V = (0..6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let z = p.feasible().project(&x).unwrap();
        assert!(p.dual_set().residual(&z) < 1e-8);
        assert!(z.iter().all(|&c| c >= -1e-12));
        let rows: Vec<V> = {
            let a = p.dual_set().matrix().to_dense_rows();
            a.into_iter().map(Vector::new).collect()
        };
        let zd = project_affine_nonneg(&rows, p.dual_set().rhs(), &x).unwrap();
        assert!(zd.dist(&z) < 1e-7);
    }
}
