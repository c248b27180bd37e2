//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use persuasion::analysis;
use persuasion::cutoffs;
use persuasion::equilibrium::{self, solve_smpe, Case};
use persuasion::model::ModelParams;
use persuasion::simulate::{self, FixedPolicyProfile, MarkovProfile, SimConfig};
use persuasion::value;
use persuasion::verify::{self, VerifyOptions};
use persuasion::Params;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    o.passed &= elapsed < limit;
    o.detail = format!("{}; {:.2?} (limit {:?})", o.detail, elapsed, limit);
    o
}

fn sym(v: f64, c: f64, p_star: f64) -> Params {
    ModelParams::symmetric(v, c, p_star)
}

fn eta_criterion() -> Outcome {
    timed(Duration::from_secs(1), || {
        let eta: f64 = cutoffs::eta();
        let residual = cutoffs::eta_residual(eta).unwrap();
        let ok = (0.9430..=0.9435).contains(&eta) && residual.abs() <= 1e-9;
        outcome(ok, format!("eta = {eta:.12}, residual = {residual:.3e}"))
    })
}

fn hjb_criterion() -> Outcome {
    timed(Duration::from_secs(5), || {
        let mut ok = true;
        let mut parts = Vec::new();
        for (m, case) in [
            (sym(1.0, 0.01, 0.6), Case::ReceiverBoundDirect),
            (sym(1.0, 0.001, 0.96), Case::ReceiverBoundInterior),
        ] {
            let e = solve_smpe(&m).unwrap();
            let hjb = verify::hjb_grid(&e, 2001).unwrap();
            let mut cuts = e.interior_cutoffs();
            cuts.extend(e.cutoffs.xi1.value());
            let kinks: Vec<_> = cuts.iter().map(|&k| verify::viscosity_kink_check_at(&e, k).unwrap()).collect();
            let this = e.case == case
                && hjb.points >= 1999
                && hjb.max_abs_residual <= 1e-8
                && kinks.iter().all(|k| k.passed);
            ok &= this;
            parts.push(format!(
                "{}: max |residual| = {:.2e} over {} points, {} cutoff checks",
                e.case.as_str(),
                hjb.max_abs_residual,
                hjb.points,
                kinks.len()
            ));
        }
        outcome(ok, parts.join("; "))
    })
}

fn search_criterion() -> Outcome {
    timed(Duration::from_secs(60), || {
        let opts = VerifyOptions::default();
        let mut ok = true;
        let mut parts = Vec::new();
        for m in [
            sym(1.0, 0.01, 0.6),
            sym(1.0, 0.001, 0.96),
            sym(0.1, 0.001, 0.6),
            sym(0.01, 0.0001, 0.96),
        ] {
            let e = solve_smpe(&m).unwrap();
            let beliefs = verify::search_beliefs(&e, opts.search_beliefs);
            let cell = 1.0 / (opts.search_grid - 1) as f64;
            let anchors = [0.0, e.cutoffs.p_low.value().unwrap(), m.p_star];
            let mut max_excess = 0.0f64;
            let mut stray = 0;
            for &p in &beliefs {
                let s = verify::flow_value_bruteforce(&e, p, opts.search_grid).unwrap();
                max_excess = max_excess.max(s.excess);
                let on_anchor = s.best_structure.iter().all(|&(_, q)| anchors.iter().any(|a| (a - q).abs() <= cell));
                if !s.passing_optimal && !on_anchor {
                    stray += 1;
                }
            }
            ok &= max_excess <= 5e-4 && stray == 0 && beliefs.len() >= 199;
            parts.push(format!(
                "{}: {} beliefs, max excess {:.2e}, stray targets {}",
                e.case.as_str(),
                beliefs.len(),
                max_excess,
                stray
            ));
        }
        outcome(ok, parts.join("; "))
    })
}

fn monte_carlo_criterion() -> Outcome {
    timed(Duration::from_secs(120), || {
        let cfg = SimConfig { dt: 1e-3, paths: 200_000, seed: 20_240_601, ..Default::default() };
        let m = sym(1.0, 0.01, 0.6);
        let e = solve_smpe(&m).unwrap();
        let stat = FixedPolicyProfile::stationary(m);
        let full = FixedPolicyProfile::full_revelation(m);
        let runs: [(&str, &dyn MarkovProfile, f64, (f64, f64)); 3] = [
            ("equilibrium", &e, 0.3, (e.sender_value(0.3).unwrap(), e.receiver_value(0.3).unwrap())),
            ("stationary", &stat, 0.5, (value::v_stationary(&m, 0.5).unwrap(), value::u_stationary(&m, 0.5).unwrap())),
            ("full revelation", &full, 0.5, (
                equilibrium::full_revelation_value(&m, 0.5),
                0.5 * m.u_rr + 0.5 * m.u_ll - 2.0 * m.cost_scale(),
            )),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (name, prof, p0, (v, u)) in runs {
            let r = simulate::simulate(prof, p0, &cfg).unwrap();
            let dv = (r.sender_mean - v).abs();
            let du = (r.receiver_mean - u).abs();
            let this = r.censored == 0
                && dv <= 3.0 * r.sender_se + 5e-3
                && du <= 3.0 * r.receiver_se + 5e-3;
            ok &= this;
            parts.push(format!(
                "{name}: sender {:.5} vs {v:.5} (se {:.1e}), receiver {:.5} vs {u:.5} (se {:.1e})",
                r.sender_mean, r.sender_se, r.receiver_mean, r.receiver_se
            ));
        }
        outcome(ok, parts.join("; "))
    })
}

fn sweep_criterion() -> Outcome {
    let rows = analysis::c_sweep(&sym(1.0, 0.01, 0.6), 0.3, &[1e-2, 1e-3, 1e-4, 1e-5]);
    let lows: Vec<f64> = rows.iter().filter_map(|r| r.p_low).collect();
    let last = rows.last().unwrap();
    let ok = lows.len() == 4
        && lows.windows(2).all(|w| w[1] < w[0])
        && lows[3] < 1e-2
        && (last.sender_value.unwrap() - 0.5).abs() <= 1e-2
        && (last.receiver_value.unwrap() - 0.8).abs() <= 1e-2;
    outcome(
        ok,
        format!(
            "p_low = {:?}; (V, U) at c = 1e-5: ({:.5}, {:.5})",
            lows.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>(),
            last.sender_value.unwrap_or(f64::NAN),
            last.receiver_value.unwrap_or(f64::NAN)
        ),
    )
}

fn no_persuasion_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = 0;
    for _ in 0..20 {
        let d: common::Draw = std::array::from_fn(|_| rng.gen());
        let m = common::params_from(&d);
        if !analysis::no_persuasion_report(&m, 200, 2001).map(|r| r.passed).unwrap_or(false) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("20 parameter draws, {failures} failures"))
}

fn property_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, check) in common::PROPERTIES {
        let failures = (0..100)
            .filter(|_| {
                let d: common::Draw = std::array::from_fn(|_| rng.gen());
                check(&d).is_err()
            })
            .count();
        ok &= failures == 0;
        parts.push(format!("{name}: {failures}/100"));
    }
    outcome(ok, format!("failures: {}", parts.join(", ")))
}

/// Expected cost of R-drift stopped at `p*`, integrated over the arrival
/// time of news with Simpson's rule.
fn drift_cost_by_quadrature(m: &Params, p0: f64) -> f64 {
    let ps = m.p_star;
    let tau = ((ps / (1.0 - ps)) * ((1.0 - p0) / p0)).ln() / m.lambda;
    let n = 4000;
    let h = tau / n as f64;
    let f = |t: f64| m.c * t * m.lambda * (-m.lambda * t).exp();
    let mut s = f(0.0) + f(tau);
    for i in 1..n {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    (1.0 - p0) * s * h / 3.0 + (p0 + (1.0 - p0) * (-m.lambda * tau).exp()) * m.c * tau
}

fn quadrature_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let d: common::Draw = std::array::from_fn(|_| rng.gen());
        let m = common::params_from(&d);
        let p0 = m.p_star * rng.gen_range(0.02..0.98);
        let closed = value::c_plus(&m, p0, m.p_star).unwrap();
        worst = worst.max((closed - drift_cost_by_quadrature(&m, p0)).abs());
    }
    outcome(worst <= 1e-6, format!("20 pairs, max |closed form - quadrature| = {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("AC1 eta threshold", eta_criterion),
        ("AC2 sender equation and kinks", hjb_criterion),
        ("AC3 exhaustive deviation search", search_criterion),
        ("AC4 Monte Carlo agreement", monte_carlo_criterion),
        ("AC5 vanishing-cost sweep", sweep_criterion),
        ("AC6 no-persuasion equilibrium", no_persuasion_criterion),
        ("AC7 property suites", property_criterion),
        ("AC8 drift cost quadrature", quadrature_criterion),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!("{} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
