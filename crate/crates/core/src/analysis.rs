//! Comparative statics and benchmark reports built on solved profiles.

use serde::Serialize;
use thiserror::Error;

use crate::equilibrium::{self, no_persuasion_profile, solve_smpe, Case, SolveError};
use crate::model::ModelParams;
use crate::value;
use crate::verify::{self, VerifyError};
use crate::Params;

/// One attention cost of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub c: f64,
    pub case: Option<Case>,
    pub p_low: Option<f64>,
    pub sender_value: Option<f64>,
    pub receiver_value: Option<f64>,
    pub sender_limit: f64,
    pub receiver_limit: f64,
    pub error: Option<String>,
}

/// Solves the game at each cost in `costs`, holding everything else fixed.
/// Failures are recorded per row and do not stop the sweep.
pub fn c_sweep(base: &Params, p0: f64, costs: &[f64]) -> Vec<SweepRow> {
    let (sender_limit, receiver_limit) = equilibrium::vanishing_cost_limit(base, p0);
    costs
        .iter()
        .map(|&c| {
            let m = ModelParams { c, ..*base };
            let mut row = SweepRow {
                c,
                case: None,
                p_low: None,
                sender_value: None,
                receiver_value: None,
                sender_limit,
                receiver_limit,
                error: None,
            };
            let solved = solve_smpe(&m).map_err(|e| e.to_string()).and_then(|e| {
                let v = e.sender_value(p0).map_err(|x| x.to_string())?;
                let u = e.receiver_value(p0).map_err(|x| x.to_string())?;
                Ok((e, v, u))
            });
            match solved {
                Ok((e, v, u)) => {
                    row.case = Some(e.case);
                    row.p_low = e.cutoffs.p_low.value();
                    row.sender_value = Some(v);
                    row.receiver_value = Some(u);
                }
                Err(msg) => row.error = Some(msg),
            }
            row
        })
        .collect()
}

/// Equilibrium and limiting payoffs for one persuasion target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierRow {
    pub p_star: f64,
    pub sender_value: Option<f64>,
    pub receiver_value: Option<f64>,
    pub sender_limit: f64,
    pub receiver_limit: f64,
    pub within_bounds: Option<bool>,
    pub error: Option<String>,
}

/// Traces achievable payoffs as the target `p*` varies at cost `c`.
pub fn frontier(base: &Params, p0: f64, targets: &[f64], c: f64) -> Vec<FrontierRow> {
    targets
        .iter()
        .map(|&p_star| {
            let m = ModelParams { c, p_star, ..*base };
            let (sender_limit, receiver_limit) = equilibrium::vanishing_cost_limit(&m, p0);
            let mut row = FrontierRow {
                p_star,
                sender_value: None,
                receiver_value: None,
                sender_limit,
                receiver_limit,
                within_bounds: None,
                error: None,
            };
            match solve_smpe(&m) {
                Ok(e) => match (e.sender_value(p0), e.receiver_value(p0)) {
                    (Ok(v), Ok(u)) => {
                        row.sender_value = Some(v);
                        row.receiver_value = Some(u);
                        if e.is_waiting(p0) || p0 >= p_star {
                            row.within_bounds = Some(within_payoff_bounds(&m, p0, v, u));
                        }
                    }
                    (Err(x), _) | (_, Err(x)) => row.error = Some(x.to_string()),
                },
                Err(x) => row.error = Some(x.to_string()),
            }
            row
        })
        .collect()
}

/// The payoff pair `(0, myopic(p0))` of the no-persuasion equilibrium,
/// present when the receiver would take `l` at the prior.
pub fn no_persuasion_point(m: &Params, p0: f64) -> Option<(f64, f64)> {
    (p0 < m.phat()).then(|| (0.0, m.myopic(p0)))
}

/// Whether `(v, u)` lies in the closure of the payoffs attainable as costs
/// vanish, widened by the attention costs at the current `c`.
pub fn within_payoff_bounds(m: &Params, p0: f64, v: f64, u: f64) -> bool {
    let stationary = value::c_stationary(m, p0.min(m.p_star)).unwrap_or(0.0).max(0.0);
    let wedge = 2.0 * m.cost_scale() + stationary;
    let v_hi = (p0 / m.phat()).min(1.0) * m.v;
    let v_lo = p0 * m.v;
    let u_lo = m.myopic(p0);
    let u_hi = p0 * m.u_rr + (1.0 - p0) * m.u_ll;
    v <= v_hi + wedge && v >= v_lo - wedge && u >= u_lo - wedge && u <= u_hi + wedge
}

/// Certificate that the no-persuasion profile is an equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoPersuasionReport {
    pub beliefs: usize,
    pub receiver_failures: Vec<f64>,
    pub sender_failures: Vec<f64>,
    /// Sender's net flow payoff from L-drift at the lower cutoff.
    pub flow_at_low: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoPersuasionError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Checks the receiver's myopic play and the sender's best responses on
/// a grid of beliefs.
pub fn no_persuasion_report(
    m: &Params,
    beliefs: usize,
    search_grid: usize,
) -> Result<NoPersuasionReport, NoPersuasionError> {
    let e = no_persuasion_profile(m)?;
    let phat = m.phat();
    let low = e.cutoffs.p_low.value().expect("lower cutoff defined");
    let flow_at_low = m.lambda * low * (1.0 - low) * m.v / (phat - low) - m.c;
    let mut grid: Vec<f64> = (0..beliefs).map(|i| (i as f64 + 0.5) / beliefs as f64).collect();
    grid.extend([low * 0.5, low * 1.5, phat * 0.999, phat]);
    let mut receiver_failures = Vec::new();
    let mut sender_failures = Vec::new();
    for &p in &grid {
        if !verify::receiver_deviation_check(&e, p)?.passed {
            receiver_failures.push(p);
        }
        if verify::flow_value_bruteforce(&e, p, search_grid)?.excess > 1e-9 {
            sender_failures.push(p);
        }
    }
    let passed = receiver_failures.is_empty() && sender_failures.is_empty() && flow_at_low.abs() <= 1e-10;
    Ok(NoPersuasionReport { beliefs: grid.len(), receiver_failures, sender_failures, flow_at_low, passed })
}
