//! Monte Carlo simulation of the game in discrete periods of length `dt`.
//!
//! In each period news from experiment `i` arrives with probability
//! `rate_i * dt` in the realised state, at most one arrival per period, and
//! moves the belief to the experiment's target. Otherwise the belief is
//! updated on the absence of news. Each path draws from its own ChaCha
//! stream indexed by the path number, so results do not depend on thread
//! scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::equilibrium::SenderPolicy;
use crate::model::{Action, ReceiverChoice};
use crate::{Params, Profile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation setting: {0}")]
    Config(&'static str),
    #[error("period too long: arrival probabilities sum to {total} at belief {p}")]
    InvalidDt { p: f64, total: f64 },
}

/// Belief update in a period without news.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoJumpUpdate {
    /// Continuous-time drift integrated exactly over the period.
    #[default]
    Exponential,
    /// Bayes' rule on the event that no news arrived; beliefs are an exact
    /// martingale.
    Bayes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub dt: f64,
    pub paths: usize,
    pub seed: u64,
    /// Paths still undecided at this time are censored.
    pub max_time: f64,
    #[serde(default)]
    pub update: NoJumpUpdate,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { dt: 1e-3, paths: 200_000, seed: 1, max_time: 200.0, update: NoJumpUpdate::Exponential }
    }
}

impl SimConfig {
    pub fn validate(&self, lambda: f64) -> Result<(), SimError> {
        if !(self.dt > 0.0 && self.dt * lambda < 1.0) {
            return Err(SimError::Config("0 < dt < 1/lambda"));
        }
        if self.paths == 0 {
            return Err(SimError::Config("paths > 0"));
        }
        if !(self.max_time > 0.0) {
            return Err(SimError::Config("max_time > 0"));
        }
        Ok(())
    }
}

/// A Markov strategy profile the simulator can play.
pub trait MarkovProfile: Sync {
    fn params(&self) -> &Params;
    fn decide(&self, p: f64) -> (SenderPolicy<f64>, ReceiverChoice);
    /// Beliefs at which no-news drift stops; updates that would cross one land on it.
    fn absorbing_points(&self) -> Vec<f64> {
        Vec::new()
    }
}

impl MarkovProfile for Profile {
    fn params(&self) -> &Params {
        &self.params
    }

    fn decide(&self, p: f64) -> (SenderPolicy<f64>, ReceiverChoice) {
        self.policy_at(p)
    }

    fn absorbing_points(&self) -> Vec<f64> {
        Profile::absorbing_points(self)
    }
}

/// The sender uses one policy everywhere; the receiver waits on the open
/// interval `(wait_low, wait_high)`, takes `l` at or below it and `r` at or
/// above it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPolicyProfile {
    pub params: Params,
    pub policy: SenderPolicy<f64>,
    pub wait_low: f64,
    pub wait_high: f64,
}

impl FixedPolicyProfile {
    /// Stationary split between `0` and `p*`.
    pub fn stationary(params: Params) -> Self {
        let high = params.p_star;
        Self { params, policy: SenderPolicy::Stationary { high }, wait_low: 0.0, wait_high: high }
    }

    /// Stationary split between `0` and `1`, revealing the state.
    pub fn full_revelation(params: Params) -> Self {
        Self { params, policy: SenderPolicy::Stationary { high: 1.0 }, wait_low: 0.0, wait_high: 1.0 }
    }

    /// R-drift until the belief reaches `stop`.
    pub fn r_drift_until(params: Params, stop: f64) -> Self {
        Self { params, policy: SenderPolicy::RDrift, wait_low: 0.0, wait_high: stop }
    }
}

impl MarkovProfile for FixedPolicyProfile {
    fn params(&self) -> &Params {
        &self.params
    }

    fn decide(&self, p: f64) -> (SenderPolicy<f64>, ReceiverChoice) {
        let choice = if p <= self.wait_low {
            ReceiverChoice::Take(Action::L)
        } else if p >= self.wait_high {
            ReceiverChoice::Take(Action::R)
        } else {
            ReceiverChoice::Wait
        };
        (self.policy, choice)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathOutcome {
    pub state: Action,
    /// `None` when the path was censored.
    pub action: Option<Action>,
    pub listening_time: f64,
    pub final_belief: f64,
    pub sender_payoff: f64,
    pub receiver_payoff: f64,
}

struct Step {
    targets: [f64; 2],
    in_l: [f64; 2],
    in_r: [f64; 2],
    net_up: f64,
    active: bool,
}

fn step_rates(lambda: f64, policy: &SenderPolicy<f64>, p: f64) -> Step {
    let ex = policy.experiments();
    let mut s = Step { targets: [0.0; 2], in_l: [0.0; 2], in_r: [0.0; 2], net_up: 0.0, active: false };
    for (i, e) in ex.iter().enumerate() {
        if e.weight <= 0.0 {
            continue;
        }
        s.active = true;
        let r = e.rates(lambda, p);
        s.targets[i] = r.target;
        s.in_l[i] = r.in_l;
        s.in_r[i] = r.in_r;
        if e.target > p {
            s.net_up += e.weight;
        } else if e.target < p {
            s.net_up -= e.weight;
        }
    }
    s
}

fn no_jump(update: NoJumpUpdate, lambda: f64, dt: f64, s: &Step, p: f64) -> f64 {
    match update {
        NoJumpUpdate::Exponential => {
            let k = (-lambda * dt * s.net_up).exp();
            p * k / (p * k + 1.0 - p)
        }
        NoJumpUpdate::Bayes => {
            let stay_r = 1.0 - (s.in_r[0] + s.in_r[1]) * dt;
            let stay_l = 1.0 - (s.in_l[0] + s.in_l[1]) * dt;
            p * stay_r / (p * stay_r + (1.0 - p) * stay_l)
        }
    }
}

fn payoff(m: &Params, a: Action, state: Action) -> f64 {
    match (a, state) {
        (Action::L, Action::L) => m.u_ll,
        (Action::L, Action::R) => m.u_lr,
        (Action::R, Action::L) => m.u_rl,
        (Action::R, Action::R) => m.u_rr,
    }
}

/// Plays one path from `p0`. The state is drawn from `p0` on the path's
/// own random stream.
pub fn simulate_path(
    profile: &dyn MarkovProfile,
    p0: f64,
    cfg: &SimConfig,
    path_index: u64,
) -> Result<PathOutcome, SimError> {
    let m = profile.params();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(path_index);
    let state = if rng.gen::<f64>() < p0 { Action::R } else { Action::L };
    let absorbing = profile.absorbing_points();
    let max_steps = (cfg.max_time / cfg.dt).ceil() as u64;
    let mut p = p0;
    let mut listening = 0.0;
    for _ in 0..=max_steps {
        let (policy, choice) = profile.decide(p);
        if let ReceiverChoice::Take(a) = choice {
            let sender = if a == Action::R { m.v } else { 0.0 } - m.c * listening;
            return Ok(PathOutcome {
                state,
                action: Some(a),
                listening_time: listening,
                final_belief: p,
                sender_payoff: sender,
                receiver_payoff: payoff(m, a, state) - m.c * listening,
            });
        }
        let s = step_rates(m.lambda, &policy, p);
        if !s.active {
            break;
        }
        let total_l = (s.in_l[0] + s.in_l[1]) * cfg.dt;
        let total_r = (s.in_r[0] + s.in_r[1]) * cfg.dt;
        if total_l >= 1.0 || total_r >= 1.0 {
            return Err(SimError::InvalidDt { p, total: total_l.max(total_r) });
        }
        let rates = if state == Action::R { &s.in_r } else { &s.in_l };
        let u: f64 = rng.gen();
        listening += cfg.dt;
        if u < rates[0] * cfg.dt {
            p = s.targets[0];
        } else if u < (rates[0] + rates[1]) * cfg.dt {
            p = s.targets[1];
        } else {
            let next = no_jump(cfg.update, m.lambda, cfg.dt, &s, p);
            p = absorbing
                .iter()
                .copied()
                .find(|&a| (p < a && next > a) || (p > a && next < a))
                .unwrap_or(next);
        }
    }
    Ok(PathOutcome {
        state,
        action: None,
        listening_time: listening,
        final_belief: p,
        sender_payoff: -m.c * listening,
        receiver_payoff: -m.c * listening,
    })
}

/// Expected belief after one period from `p`, used to check the
/// martingale property of the discretisation.
pub fn one_step_mean(profile: &dyn MarkovProfile, p: f64, dt: f64, update: NoJumpUpdate) -> f64 {
    let m = profile.params();
    let s = step_rates(m.lambda, &profile.decide(p).0, p);
    let mut mean = 0.0;
    let mut stay = 1.0;
    for i in 0..2 {
        let prob = (p * s.in_r[i] + (1.0 - p) * s.in_l[i]) * dt;
        mean += prob * s.targets[i];
        stay -= prob;
    }
    mean + stay * no_jump(update, m.lambda, dt, &s, p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub paths: usize,
    pub sender_mean: f64,
    pub sender_se: f64,
    pub receiver_mean: f64,
    pub receiver_se: f64,
    pub mean_listening_time: f64,
    pub prob_r: f64,
    pub censored: usize,
}

fn summarize(outcomes: &[PathOutcome]) -> SimulationResult {
    let n = outcomes.len() as f64;
    let mean_se = |f: &dyn Fn(&PathOutcome) -> f64| {
        let mean = outcomes.iter().map(f).sum::<f64>() / n;
        let var = outcomes.iter().map(|o| (f(o) - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
        (mean, (var / n).sqrt())
    };
    let (sender_mean, sender_se) = mean_se(&|o| o.sender_payoff);
    let (receiver_mean, receiver_se) = mean_se(&|o| o.receiver_payoff);
    SimulationResult {
        paths: outcomes.len(),
        sender_mean,
        sender_se,
        receiver_mean,
        receiver_se,
        mean_listening_time: outcomes.iter().map(|o| o.listening_time).sum::<f64>() / n,
        prob_r: outcomes.iter().filter(|o| o.action == Some(Action::R)).count() as f64 / n,
        censored: outcomes.iter().filter(|o| o.action.is_none()).count(),
    }
}

/// Plays `cfg.paths` paths in parallel and summarises them.
pub fn simulate(profile: &dyn MarkovProfile, p0: f64, cfg: &SimConfig) -> Result<SimulationResult, SimError> {
    Ok(summarize(&simulate_paths(profile, p0, cfg, true)?))
}

/// [`simulate`] on the calling thread only.
pub fn simulate_serial(profile: &dyn MarkovProfile, p0: f64, cfg: &SimConfig) -> Result<SimulationResult, SimError> {
    Ok(summarize(&simulate_paths(profile, p0, cfg, false)?))
}

/// Every path outcome in path order.
pub fn simulate_paths(
    profile: &dyn MarkovProfile,
    p0: f64,
    cfg: &SimConfig,
    parallel: bool,
) -> Result<Vec<PathOutcome>, SimError> {
    cfg.validate(profile.params().lambda)?;
    if !(0.0..=1.0).contains(&p0) {
        return Err(SimError::Config("0 <= p0 <= 1"));
    }
    let run = |i: usize| simulate_path(profile, p0, cfg, i as u64);
    if parallel {
        (0..cfg.paths).into_par_iter().map(run).collect()
    } else {
        (0..cfg.paths).map(run).collect()
    }
}
