use proptest::prelude::*;
use sharpsa::algorithms::{run_with, Algorithm, KwConfig, PsgdConfig, RunOptions};
use sharpsa::problems::{build, ProblemOptions};
use sharpsa::rng::RngStream;
use sharpsa::schedule::{staged_schedule_b, StepSchedule};
use sharpsa::trajectory::Thinning;
use sharpsa::vector::Vector;

fn traced_run(name: &str, algo: &Algorithm<f64>, iters: usize, stream: RngStream, thinning: Thinning) -> String {
    let p = build::<f64>(name, &ProblemOptions::default()).unwrap();
    let opts = RunOptions { thinning, store_iterates: true, record_dist: true };
    let traj = run_with(p.as_ref(), algo, iters, &mut stream.rng(), opts, &mut |_, _| {}).unwrap();
    format!("{traj:?}")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn power_law_regularity(a in 1e-3f64..10.0, u in 1.0f64..100.0, gamma in 0.0f64..=1.0, t in 0usize..1_000_000) {
        let s = StepSchedule::power_law(a, u, gamma).unwrap();
        let (r, r2, r1) = (s.rate(t), s.rate(2 * t), s.rate(t + 1));
        prop_assert!(r > 0.0 && r1 <= r);
        prop_assert!(r2 / r >= 2f64.powf(-gamma) - 1e-12);
        // relative decrement is at most gamma / (u + t)
        prop_assert!((r - r1) / r <= gamma / (u + t as f64) + 1e-15);
    }

    #[test]
    fn staged_rates_are_non_increasing(a in 1e-3f64..10.0, s_max in 1usize..30, t in 0usize..2000) {
        let s = staged_schedule_b(a, s_max).unwrap();
        prop_assert!(s.rate(t + 1) <= s.rate(t));
        prop_assert!(s.stage_of(t) <= s_max);
    }

    #[test]
    fn geometric_thinning_keeps_counters(seed in 0u64..10_000, iters in 0usize..3000) {
        let p = build::<f64>("circle", &ProblemOptions::default()).unwrap();
        let algo = Algorithm::Psgd(PsgdConfig::new(StepSchedule::power_law(1.0, 1.0, 1.0).unwrap(), 2));
        let every = RunOptions { thinning: Thinning::Every, ..Default::default() };
        let thin = RunOptions { thinning: Thinning::Geometric { dense_until: 50, ratio: 1.3 }, ..Default::default() };
        let a = run_with(p.as_ref(), &algo, iters, &mut RngStream::new(seed, 0).rng(), every, &mut |_, _| {}).unwrap();
        let b = run_with(p.as_ref(), &algo, iters, &mut RngStream::new(seed, 0).rng(), thin, &mut |_, _| {}).unwrap();
        prop_assert_eq!(&a.final_iterate, &b.final_iterate);
        prop_assert_eq!(a.iterations, b.iterations);
        prop_assert_eq!(a.nontrivial_projections, b.nontrivial_projections);
        prop_assert_eq!(a.last_nontrivial, b.last_nontrivial);
        prop_assert!(b.records.len() <= a.records.len());
        // every thinned record is identical to the dense record at that step
        for r in &b.records {
            prop_assert_eq!(Some(r), a.at(r.t));
        }
        prop_assert_eq!(b.records.last().map(|r| r.t), Some(iters));
    }
}

#[test]
fn identical_streams_give_identical_traces() {
    let psgd = Algorithm::Psgd(PsgdConfig::new(StepSchedule::power_law(1.0, 1.0, 1.0).unwrap(), 3));
    let kw = Algorithm::Kw(KwConfig::new(StepSchedule::power_law(1.0, 1.0, 1.0).unwrap(), 0.3).unwrap());
    for (name, algo) in [("three-spheres", &psgd), ("lp2", &psgd), ("circle", &kw)] {
        let s = RngStream::new(42, 7);
        let a = traced_run(name, algo, 2000, s, Thinning::default());
        let b = traced_run(name, algo, 2000, s, Thinning::default());
        assert_eq!(a, b, "{name}");
        let c = traced_run(name, algo, 2000, RngStream::new(42, 8), Thinning::default());
        assert_ne!(a, c, "{name}: distinct replications coincide");
    }
}

#[test]
fn derived_streams_do_not_collide() {
    use rand::RngCore;
    let base = RngStream::new(1, 0);
    let mut draws: Vec<u64> = Vec::new();
    for s in [base, RngStream::new(1, 1), base.derive(1), base.derive(2), RngStream::new(2, 0)] {
        draws.push(s.rng().next_u64());
    }
    let mut sorted = draws.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), draws.len());
}

#[test]
fn single_precision_run_tracks_double() {
    let p32 = build::<f32>("circle", &ProblemOptions { sigma: Some(0.0), ..Default::default() }).unwrap();
    let p64 = build::<f64>("circle", &ProblemOptions { sigma: Some(0.0), ..Default::default() }).unwrap();
    let a32 = Algorithm::Psgd(PsgdConfig::new(StepSchedule::power_law(1.0f32, 1.0, 1.0).unwrap(), 1));
    let a64 = Algorithm::Psgd(PsgdConfig::new(StepSchedule::power_law(1.0f64, 1.0, 1.0).unwrap(), 1));
    let opts = RunOptions::default();
    let t32 = run_with(p32.as_ref(), &a32, 500, &mut RngStream::new(3, 0).rng(), opts, &mut |_, _: &Vector<f32>| {});
    let t64 = run_with(p64.as_ref(), &a64, 500, &mut RngStream::new(3, 0).rng(), opts, &mut |_, _: &Vector<f64>| {});
    // exact gradients oscillate around the optimum within one step size
    let (d32, d64) = (t32.unwrap().records.last().unwrap().dist, t64.unwrap().records.last().unwrap().dist);
    assert!(d32.unwrap() <= 4e-3 && d64.unwrap() <= 4e-3, "{d32:?} vs {d64:?}");
}
