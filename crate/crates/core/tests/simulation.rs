use persuasion::equilibrium::solve_smpe;
use persuasion::model::ModelParams;
use persuasion::simulate::{simulate, NoJumpUpdate, SimConfig};

fn cfg(dt: f64, paths: usize) -> SimConfig {
    SimConfig { dt, paths, seed: 4242, max_time: 200.0, update: NoJumpUpdate::Exponential }
}

#[test]
fn error_shrinks_with_period() {
    let m = ModelParams::symmetric(1.0, 0.01, 0.6);
    let e = solve_smpe(&m).unwrap();
    let exact = e.sender_value(0.3).unwrap();
    let err = |dt| (simulate(&e, 0.3, &cfg(dt, 400_000)).unwrap().sender_mean - exact).abs();
    let (coarse, fine) = (err(0.2), err(0.05));
    assert!(coarse / fine > 2.0, "coarse {coarse}, fine {fine}");
}

#[test]
fn sender_bound_regimes_match_closed_form() {
    for (m, p0) in [
        (ModelParams::symmetric(0.1, 0.001, 0.6), 0.3),
        (ModelParams::symmetric(1.0, 0.001, 0.96), 0.7),
        (ModelParams::symmetric(1.0, 0.001, 0.96), 0.4),
    ] {
        let e = solve_smpe(&m).unwrap();
        let r = simulate(&e, p0, &cfg(2e-3, 40_000)).unwrap();
        let (v, u) = (e.sender_value(p0).unwrap(), e.receiver_value(p0).unwrap());
        assert!((r.sender_mean - v).abs() <= 3.0 * r.sender_se + 5e-3, "{:?} {r:?} {v}", e.case);
        assert!((r.receiver_mean - u).abs() <= 3.0 * r.receiver_se + 5e-3, "{:?} {r:?} {u}", e.case);
    }
}

#[test]
fn update_rules_agree_in_the_limit() {
    let m = ModelParams::symmetric(1.0, 0.01, 0.6);
    let e = solve_smpe(&m).unwrap();
    let a = simulate(&e, 0.3, &cfg(1e-3, 20_000)).unwrap();
    let b = simulate(&e, 0.3, &SimConfig { update: NoJumpUpdate::Bayes, ..cfg(1e-3, 20_000) }).unwrap();
    assert!((a.sender_mean - b.sender_mean).abs() < 3e-3);
}

#[test]
fn same_seed_same_result() {
    let m = ModelParams::symmetric(1.0, 0.01, 0.6);
    let e = solve_smpe(&m).unwrap();
    let a = simulate(&e, 0.3, &cfg(1e-2, 5_000)).unwrap();
    let b = simulate(&e, 0.3, &cfg(1e-2, 5_000)).unwrap();
    let c = simulate(&e, 0.3, &SimConfig { seed: 1, ..cfg(1e-2, 5_000) }).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
