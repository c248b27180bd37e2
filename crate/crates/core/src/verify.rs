//! Numerical certificates that a profile is an equilibrium.

use serde::Serialize;
use thiserror::Error;

use crate::equilibrium::{Side, Valuation};
use crate::model::{Action, ReceiverChoice};
use crate::value::{self, ValueError};
use crate::{Params, Profile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("belief {0} lies outside the waiting region")]
    OutsideWaiting(f64),
    #[error("belief {0} is a kink of the value function; use the viscosity check")]
    Kink(f64),
    #[error(transparent)]
    Value(#[from] ValueError),
}

const KINK_TOL: f64 = 1e-12;

fn is_kink(profile: &Profile, p: f64) -> bool {
    let smooth = profile.absorbing_points();
    profile
        .interior_cutoffs()
        .iter()
        .any(|&k| (k - p).abs() <= KINK_TOL && !smooth.contains(&k))
}

fn hamiltonian(m: &Params, p: f64, alpha: f64, v: f64, slope: f64) -> f64 {
    let (ps, up) = (m.p_star, m.v);
    m.lambda * p * (1.0 - p) * (alpha * (up - v) / (ps - p) - (1.0 - alpha) * v / p - (2.0 * alpha - 1.0) * slope)
}

fn waiting_alpha(profile: &Profile, p: f64) -> Result<f64, VerifyError> {
    if !profile.is_waiting(p) {
        return Err(VerifyError::OutsideWaiting(p));
    }
    if is_kink(profile, p) {
        return Err(VerifyError::Kink(p));
    }
    Ok(profile.policy_at(p).0.upward_weight())
}

/// Residual of the sender's equation at `p` using closed-form slopes.
pub fn hjb_residual(profile: &Profile, p: f64) -> Result<f64, VerifyError> {
    let alpha = waiting_alpha(profile, p)?;
    let v = profile.sender_value(p)?;
    let slope = profile.sender_slope(p)?;
    Ok(profile.params.c - hamiltonian(&profile.params, p, alpha, v, slope))
}

/// [`hjb_residual`] with a central finite-difference slope of step `h`.
pub fn hjb_residual_fd(profile: &Profile, p: f64, h: f64) -> Result<f64, VerifyError> {
    let alpha = waiting_alpha(profile, p)?;
    let b = match profile.segment_at(p).valuation {
        Valuation::Waiting(b) => b,
        Valuation::Stopped(_) => return Err(VerifyError::OutsideWaiting(p)),
    };
    let m = &profile.params;
    let slope = (b.sender(m, p + h)? - b.sender(m, p - h)?) / (2.0 * h);
    let v = profile.sender_value(p)?;
    Ok(m.c - hamiltonian(m, p, alpha, v, slope))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HjbSummary {
    pub points: usize,
    pub max_abs_residual: f64,
    pub worst_belief: f64,
}

/// Maximum residual over `n` evenly spaced interior beliefs of the waiting
/// region, skipping kinks.
pub fn hjb_grid(profile: &Profile, n: usize) -> Result<HjbSummary, VerifyError> {
    let (lo, hi) = profile.waiting_region();
    let mut out = HjbSummary { points: 0, max_abs_residual: 0.0, worst_belief: f64::NAN };
    if lo >= hi {
        return Ok(out);
    }
    for i in 1..=n {
        let p = lo + (hi - lo) * i as f64 / (n + 1) as f64;
        if is_kink(profile, p) {
            continue;
        }
        let r = hjb_residual(profile, p)?.abs();
        out.points += 1;
        if !(r <= out.max_abs_residual) {
            out.max_abs_residual = r;
            out.worst_belief = p;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KinkCheck {
    pub belief: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    pub convex: bool,
    /// Largest Hamiltonian over the subdifferential, net of the cost.
    pub max_excess: f64,
    pub passed: bool,
}

/// Subsolution test at a kink: the kink must be convex and no slope between
/// the one-sided derivatives may push the Hamiltonian above the cost.
pub fn viscosity_kink_check(m: &Params, p: f64, value: f64, left_slope: f64, right_slope: f64) -> KinkCheck {
    const TOL: f64 = 1e-8;
    let convex = left_slope <= right_slope + TOL;
    let n = 101;
    let mut max_excess = f64::NEG_INFINITY;
    for i in 0..n {
        let z = left_slope + (right_slope - left_slope) * i as f64 / (n - 1) as f64;
        for alpha in [0.0, 1.0] {
            max_excess = max_excess.max(hamiltonian(m, p, alpha, value, z) - m.c);
        }
    }
    KinkCheck {
        belief: p,
        left_slope,
        right_slope,
        convex,
        max_excess,
        passed: convex && max_excess <= TOL,
    }
}

/// [`viscosity_kink_check`] with slopes taken from the profile's branches.
pub fn viscosity_kink_check_at(profile: &Profile, p: f64) -> Result<KinkCheck, VerifyError> {
    let left = profile.sender_slope_side(p, Side::Left)?;
    let right = profile.sender_slope_side(p, Side::Right)?;
    let v = profile.sender_value(p)?;
    Ok(viscosity_kink_check(&profile.params, p, v, left, right))
}

/// Outcome of an exhaustive search over attention allocations at one belief.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSearch {
    pub belief: f64,
    /// Best gross flow value over allocations with full attention.
    pub best_value: f64,
    /// Weights and targets of the maximiser.
    pub best_structure: Vec<(f64, f64)>,
    /// Gross flow value of the profile's own allocation.
    pub profile_value: f64,
    /// Whether the profile pays attention at this belief.
    pub profile_active: bool,
    /// Whether passing beats every allocation.
    pub passing_optimal: bool,
    /// Best net flow minus the profile's net flow.
    pub excess: f64,
}

/// Gross flow value of moving attention to news with target `q` at `p`,
/// given the profile's continuation values.
pub fn target_flow(profile: &Profile, p: f64, v: f64, slope: f64, q: f64) -> Result<f64, VerifyError> {
    let m = &profile.params;
    let base = m.lambda * p * (1.0 - p);
    let vq = profile.sender_value(q)?;
    Ok(base / (q - p).abs() * (vq - v) - (q - p).signum() * base * slope)
}

/// Maximises the sender's flow value over two-experiment allocations with
/// weights in `{0, 1/2, 1}` and targets on a grid of `grid` points plus
/// the profile's cutoffs. Linearity in weights makes this exhaustive.
pub fn flow_value_bruteforce(profile: &Profile, p: f64, grid: usize) -> Result<FlowSearch, VerifyError> {
    let m = &profile.params;
    let v = profile.sender_value(p)?;
    let waiting = profile.is_waiting(p);
    let slope = if waiting { profile.sender_slope(p)? } else { 0.0 };
    let mut targets: Vec<f64> = (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect();
    targets.push(m.p_star);
    targets.push(m.phat());
    targets.extend(profile.cutoffs.entries().iter().filter_map(|(_, c)| c.value()));
    let (mut up, mut down) = ((f64::NEG_INFINITY, f64::NAN), (f64::NEG_INFINITY, f64::NAN));
    for &q in &targets {
        if !(0.0..=1.0).contains(&q) || q == p {
            continue;
        }
        let g = target_flow(profile, p, v, slope, q)?;
        let slot = if q > p { &mut up } else { &mut down };
        if g > slot.0 {
            *slot = (g, q);
        }
    }
    let candidates = [
        (up.0, vec![(1.0, up.1)]),
        (down.0, vec![(1.0, down.1)]),
        (0.5 * (up.0 + down.0), vec![(0.5, down.1), (0.5, up.1)]),
    ];
    let (best_value, best_structure) = candidates
        .into_iter()
        .filter(|c| c.0.is_finite())
        .fold((f64::NEG_INFINITY, Vec::new()), |a, c| if c.0 > a.0 + 1e-12 { c } else { a });

    let policy = profile.policy_at(p).0;
    let info = policy.structure();
    let mut profile_value = 0.0;
    for e in info.experiments() {
        if e.target != p && e.weight > 0.0 {
            profile_value += e.weight * target_flow(profile, p, v, slope, e.target)?;
        }
    }
    let profile_active = info.is_active();
    let net_profile = if profile_active { profile_value - m.c } else { 0.0 };
    Ok(FlowSearch {
        belief: p,
        best_value,
        best_structure,
        profile_value,
        profile_active,
        passing_optimal: best_value <= m.c,
        excess: (best_value - m.c).max(0.0) - net_profile,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationCheck {
    pub belief: f64,
    pub waiting: bool,
    /// Receiver's gain from deviating, negative when the profile is strictly better.
    pub gain: f64,
    pub passed: bool,
}

/// Checks the receiver's choice at `p`. Inside the waiting region the
/// continuation value must weakly exceed acting now; outside it, the chosen
/// action must be myopically optimal and waiting one instant under the
/// sender's prescribed allocation must not pay.
pub fn receiver_deviation_check(profile: &Profile, p: f64) -> Result<DeviationCheck, VerifyError> {
    const TOL: f64 = 1e-9;
    let m = &profile.params;
    let (policy, choice) = profile.policy_at(p);
    let u = profile.receiver_value(p)?;
    let gain = match choice {
        ReceiverChoice::Wait => m.myopic(p) - u,
        ReceiverChoice::Take(a) => {
            let static_gain = m.myopic(p) - u;
            let slope = match a {
                Action::L => m.u_lr - m.u_ll,
                Action::R => m.u_rr - m.u_rl,
            };
            let info = policy.structure();
            let mut wait = info.drift_rate(m.lambda, p) * slope;
            for r in info.jump_rates(m.lambda, p) {
                if r.unconditional > 0.0 {
                    wait += r.unconditional * (profile.receiver_value(r.target)? - u);
                }
            }
            if info.is_active() {
                wait -= m.c;
            }
            static_gain.max(wait)
        }
    };
    Ok(DeviationCheck { belief: p, waiting: choice == ReceiverChoice::Wait, gain, passed: gain <= TOL })
}

/// Sender value never exceeds the value of the problem in which the
/// receiver attends to news towards both `0` and `p*` at once.
pub fn full_attention_dominance(profile: &Profile, p: f64) -> Result<bool, VerifyError> {
    let bound = value::v_full_attention(&profile.params, p.min(1.0 - 1e-12))?;
    Ok(profile.sender_value(p)? <= bound + 1e-12)
}

/// Beliefs for the flow search: half uniform on `(0, 1)`, half
/// log-uniform between `1e-4` and `p*` to resolve the low cutoffs.
pub fn search_beliefs(profile: &Profile, n: usize) -> Vec<f64> {
    let half = n / 2;
    let mut out: Vec<f64> = (0..n - half).map(|i| (i as f64 + 0.5) / (n - half) as f64).collect();
    let (a, b) = (1e-4f64.ln(), profile.params.p_star.ln());
    out.extend((0..half).map(|i| (a + (b - a) * (i as f64 + 0.5) / half as f64).exp()));
    let kinks = profile.interior_cutoffs();
    out.retain(|p| kinks.iter().all(|k| (k - p).abs() > 1e-9));
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub hjb_points: usize,
    pub hjb_tol: f64,
    pub search_beliefs: usize,
    pub search_grid: usize,
    pub flow_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { hjb_points: 2001, hjb_tol: 1e-8, search_beliefs: 200, search_grid: 2001, flow_tol: 5e-4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSummary {
    pub beliefs: usize,
    pub max_excess: f64,
    pub worst_belief: f64,
    /// Beliefs where the maximiser targets a belief other than `0`, the
    /// waiting region's lower end or `p*`.
    pub stray_targets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub hjb: HjbSummary,
    pub kinks: Vec<KinkCheck>,
    pub search: SearchSummary,
    pub receiver_failures: Vec<DeviationCheck>,
    pub full_attention_failures: Vec<f64>,
    pub passed: bool,
}

/// Runs every check on a solved profile.
pub fn verify_profile(profile: &Profile, opts: &VerifyOptions) -> Result<VerificationReport, VerifyError> {
    let hjb = hjb_grid(profile, opts.hjb_points)?;
    let kinks = profile
        .interior_cutoffs()
        .into_iter()
        .map(|k| viscosity_kink_check_at(profile, k))
        .collect::<Result<Vec<_>, _>>()?;

    let beliefs = search_beliefs(profile, opts.search_beliefs);
    let cell = 1.0 / (opts.search_grid - 1) as f64;
    let p_low = profile.cutoffs.p_low.value().unwrap_or(0.0);
    let anchors = [0.0, p_low, profile.params.p_star];
    let mut search = SearchSummary { beliefs: beliefs.len(), max_excess: 0.0, worst_belief: f64::NAN, stray_targets: Vec::new() };
    let mut receiver_failures = Vec::new();
    let mut full_attention_failures = Vec::new();
    for &p in &beliefs {
        let s = flow_value_bruteforce(profile, p, opts.search_grid)?;
        if !(s.excess <= search.max_excess) {
            search.max_excess = s.excess;
            search.worst_belief = p;
        }
        let targets_ok = s.best_structure.iter().all(|&(_, q)| anchors.iter().any(|a| (a - q).abs() <= cell));
        if !s.passing_optimal && !targets_ok {
            search.stray_targets.push(p);
        }
        let r = receiver_deviation_check(profile, p)?;
        if !r.passed {
            receiver_failures.push(r);
        }
        if !full_attention_dominance(profile, p)? {
            full_attention_failures.push(p);
        }
    }
    let passed = hjb.max_abs_residual <= opts.hjb_tol
        && kinks.iter().all(|k| k.passed)
        && search.max_excess <= opts.flow_tol
        && search.stray_targets.is_empty()
        && receiver_failures.is_empty()
        && full_attention_failures.is_empty();
    Ok(VerificationReport { hjb, kinks, search, receiver_failures, full_attention_failures, passed })
}
