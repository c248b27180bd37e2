//! Parameter generators and property predicates shared by the property
//! suite and the acceptance harness. Every predicate takes raw draws in
//! `[0, 1)` so that proptest and a seeded generator can drive it alike.

#![allow(dead_code)]

use persuasion::cutoffs;
use persuasion::model::{Experiment, InformationStructure, ModelParams};
use persuasion::value::{self, Branch};
use persuasion::Params;

pub type Draw = [f64; 9];

fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

fn log_lerp(a: f64, b: f64, t: f64) -> f64 {
    lerp(a.ln(), b.ln(), t).exp()
}

/// Maps nine uniform draws onto valid parameters.
pub fn params_from(d: &Draw) -> Params {
    let u_ll = lerp(0.5, 2.0, d[0]);
    let u_rr = lerp(0.5, 2.0, d[1]);
    let u_rl = lerp(-1.0, 0.9 * u_ll, d[2]);
    let u_lr = lerp(-1.0, 0.9 * u_rr, d[3]);
    let mut m = ModelParams {
        u_ll,
        u_rl,
        u_lr,
        u_rr,
        v: log_lerp(0.05, 3.0, d[4]),
        c: log_lerp(1e-5, 1e-2, d[5]),
        lambda: lerp(0.5, 3.0, d[6]),
        p_star: 0.5,
    };
    let phat = m.phat();
    m.p_star = lerp(phat, 1.0, lerp(0.05, 0.95, d[7]));
    m.validate().expect("generator yields valid parameters")
}

/// Symmetric payoffs with `p* > eta`.
pub fn interior_params_from(d: &Draw) -> Params {
    let eta: f64 = cutoffs::eta();
    let mut m = params_from(d);
    m.p_star = lerp(eta + 1e-4, 0.995, d[7]);
    m.u_rl = m.u_rl.min(0.0);
    m.u_lr = m.u_lr.min(0.0);
    m.validate().expect("generator yields valid parameters")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn martingale(d: &Draw) -> Result<(), String> {
    let lambda = lerp(0.1, 5.0, d[0]);
    let p = lerp(0.001, 0.999, d[1]);
    let k = 1 + (d[2] * 3.0) as usize;
    let raw: Vec<f64> = (0..k).map(|i| 0.05 + d[3 + i]).collect();
    let scale = d[6] / raw.iter().sum::<f64>();
    let ex = (0..k)
        .map(|i| Experiment { weight: raw[i] * scale, target: d[(7 + i) % 9] })
        .collect();
    let info = InformationStructure::new(ex).map_err(|e| e.to_string())?;
    let defect = info.martingale_defect(lambda, p);
    if defect.abs() <= 1e-12 * lambda {
        Ok(())
    } else {
        Err(format!("martingale defect {defect} at p = {p}"))
    }
}

pub fn convexity(d: &Draw) -> Result<(), String> {
    let m = params_from(d);
    let p = lerp(1e-3, m.p_star * 0.999, d[8]);
    for (name, k) in [
        ("plus", value::v_plus_curvature(&m, p)),
        ("minus", value::v_minus_curvature(&m, p)),
        ("stationary", value::v_stationary_curvature(&m, p)),
    ] {
        if !(k > 0.0) {
            return Err(format!("{name} curvature {k} at p = {p}"));
        }
    }
    // Discrete second differences on the R-drift branch.
    let h = 1e-4 * p.min(m.p_star - p);
    let f = |x| value::v_plus(&m, x, m.p_star, m.v).unwrap();
    let d2 = f(p + h) - 2.0 * f(p) + f(p - h);
    if d2 < -1e-15 {
        return Err(format!("negative second difference {d2} at p = {p}"));
    }
    Ok(())
}

/// Where an R-drift and an L-drift solution meet, the gap in their slopes
/// is proportional to the gap between the common value and the stationary value.
pub fn crossing(d: &Draw) -> Result<(), String> {
    let m = params_from(d);
    let ps = m.p_star;
    let p = lerp(0.05 * ps, 0.95 * ps, d[8]);
    let level = lerp(-0.5, 1.0, d[0]) * m.v;
    let q_up = lerp(p, 1.0, lerp(0.05, 0.95, d[1]));
    let c_up = value::c_plus(&m, p, q_up).map_err(|e| e.to_string())?;
    let up = Branch::Plus { target: q_up, sender_end: q_up * (level + c_up) / p, receiver_end: 0.0 };
    let q_down = lerp(0.0, p, lerp(0.05, 0.95, d[2]));
    let c_down = value::c_minus(&m, p, q_down).map_err(|e| e.to_string())?;
    let x_down = (level + c_down - (p - q_down) / (ps - q_down) * m.v) * (ps - q_down) / (ps - p);
    let down = Branch::Minus { base: q_down, sender_base: x_down, receiver_base: 0.0 };
    let e = |r: Result<f64, value::ValueError>| r.map_err(|e| e.to_string());
    let (vu, vd) = (e(up.sender(&m, p))?, e(down.sender(&m, p))?);
    if !close(vu, level, 1e-10) || !close(vd, level, 1e-10) {
        return Err(format!("branches miss the crossing: {vu} {vd} {level}"));
    }
    let gap = e(up.sender_slope(&m, p))? - e(down.sender_slope(&m, p))?;
    let vs = e(value::v_stationary(&m, p))?;
    let predicted = ps / (p * (ps - p)) * (level - vs);
    if close(gap, predicted, 1e-8) {
        Ok(())
    } else {
        Err(format!("slope gap {gap}, predicted {predicted} at p = {p}"))
    }
}

pub fn smooth_pasting(d: &Draw) -> Result<(), String> {
    let m = interior_params_from(d);
    let (x1, _) = cutoffs::xi(m.p_star).map_err(|e| e.to_string())?;
    let e = |r: Result<f64, value::ValueError>| r.map_err(|e| e.to_string());
    let rs = Branch::rs(&m, x1).map_err(|e| e.to_string())?;
    let ls = Branch::ls(&m, x1).map_err(|e| e.to_string())?;
    let s = e(value::v_stationary_slope(&m, x1))?;
    let us = e(value::u_stationary_slope(&m, x1))?;
    for (name, got, want) in [
        ("sender from below", e(rs.sender_slope(&m, x1))?, s),
        ("sender from above", e(ls.sender_slope(&m, x1))?, s),
        ("receiver from below", e(rs.receiver_slope(&m, x1))?, us),
    ] {
        if !close(got, want, 1e-9) {
            return Err(format!("{name}: slope {got} vs stationary {want} at p* = {}", m.p_star));
        }
    }
    Ok(())
}

/// Both indifference orderings flip exactly when the sender's stake in
/// persuasion overtakes the receiver's.
pub fn flips(d: &Draw) -> Result<(), String> {
    let m = params_from(d);
    let margin = m.v - m.persuasion_gain();
    if margin.abs() < 1e-9 {
        return Ok(());
    }
    let two = margin > 0.0;
    let (pi_l, phi_l) = (cutoffs::pi_ell_l(&m, m.p_star).value, cutoffs::phi_ell_l(&m).value);
    if (pi_l < phi_l) != two {
        return Err(format!("pi_ell_l = {pi_l}, phi_ell_l = {phi_l}, condition = {two}"));
    }
    match (cutoffs::pi_ell_r(&m), cutoffs::phi_ell_r(&m)) {
        (Ok(pi_r), Ok(phi_r)) if (pi_r.value < phi_r.value) != two => Err(format!(
            "pi_ell_r = {}, phi_ell_r = {}, condition = {two}",
            pi_r.value, phi_r.value
        )),
        _ => Ok(()),
    }
}

pub fn orderings(d: &Draw) -> Result<(), String> {
    let m = params_from(d);
    let (Ok(pi_r), Ok(phi_r)) = (cutoffs::pi_ell_r(&m), cutoffs::phi_ell_r(&m)) else {
        return Ok(());
    };
    let pi_l = cutoffs::pi_ell_l(&m, m.p_star).value;
    let phi_l = cutoffs::phi_ell_l(&m).value;
    if phi_l < phi_r.value && pi_l < pi_r.value {
        Ok(())
    } else {
        Err(format!(
            "phi_ell_l = {phi_l}, phi_ell_r = {}, pi_ell_l = {pi_l}, pi_ell_r = {}",
            phi_r.value, pi_r.value
        ))
    }
}

pub const PROPERTIES: [(&str, fn(&Draw) -> Result<(), String>); 6] = [
    ("martingale identity", martingale),
    ("convexity", convexity),
    ("crossing slopes", crossing),
    ("smooth pasting at xi_1", smooth_pasting),
    ("indifference flips", flips),
    ("indifference orderings", orderings),
];
