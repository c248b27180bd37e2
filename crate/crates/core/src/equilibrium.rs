//! Construction of the equilibrium strategy profile.
//!
//! A profile is an ordered partition of `[0, 1]` into segments. Each
//! segment carries the sender's attention policy and the valuation the
//! players hold there: either a smooth [`Branch`] inside the waiting
//! region or an immediate action outside it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cutoffs::{self, CutoffError, Root};
use crate::model::{Action, Experiment, InformationStructure, ModelError, ModelParams, ReceiverChoice};
use crate::scalar::Scalar;
use crate::value::{self, Branch, ValueError};

/// Equilibrium regime.
///
/// In the `ReceiverBound` cases the sender gains more from persuasion than
/// the receiver loses, so the waiting region starts where the receiver
/// becomes willing to listen. In the `SenderBound` cases it starts where
/// the sender becomes willing to pay for news. `Direct` cases drift
/// straight to `p*`; `Interior` cases hold the belief at `xi_1` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    ReceiverBoundDirect,
    ReceiverBoundInterior,
    SenderBoundDirect,
    SenderBoundInterior,
    NoPersuasion,
}

impl Case {
    pub fn as_str(self) -> &'static str {
        match self {
            Case::ReceiverBoundDirect => "receiver_bound_direct",
            Case::ReceiverBoundInterior => "receiver_bound_interior",
            Case::SenderBoundDirect => "sender_bound_direct",
            Case::SenderBoundInterior => "sender_bound_interior",
            Case::NoPersuasion => "no_persuasion",
        }
    }
}

/// Sender's attention policy at a belief.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SenderPolicy<T> {
    Pass,
    /// All attention on news revealing `L`; the belief drifts up.
    RDrift,
    /// All attention on news moving the belief to `target`; the belief drifts down.
    LDrift { target: T },
    /// Equal attention on news towards `0` and `high`.
    Stationary { high: T },
}

impl<T: Scalar> SenderPolicy<T> {
    pub fn structure(&self) -> InformationStructure<T> {
        match *self {
            SenderPolicy::Pass => InformationStructure::pass(),
            SenderPolicy::RDrift => InformationStructure::r_drift(),
            SenderPolicy::LDrift { target } => InformationStructure::l_drift(target),
            SenderPolicy::Stationary { high } => InformationStructure::stationary(T::zero(), high),
        }
    }

    /// Experiments of the policy without allocating; unused slots have zero weight.
    pub fn experiments(&self) -> [Experiment<T>; 2] {
        let none = Experiment { weight: T::zero(), target: T::zero() };
        let one = |target| Experiment { weight: T::one(), target };
        match *self {
            SenderPolicy::Pass => [none, none],
            SenderPolicy::RDrift => [one(T::zero()), none],
            SenderPolicy::LDrift { target } => [one(target), none],
            SenderPolicy::Stationary { high } => {
                let half = T::lit(0.5);
                [Experiment { weight: half, target: T::zero() }, Experiment { weight: half, target: high }]
            }
        }
    }

    /// Weight on upward news, the `alpha` of the sender's equation.
    pub fn upward_weight(&self) -> T {
        match self {
            SenderPolicy::Pass | SenderPolicy::RDrift => T::zero(),
            SenderPolicy::LDrift { .. } => T::one(),
            SenderPolicy::Stationary { .. } => T::lit(0.5),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SenderPolicy::Pass => "pass",
            SenderPolicy::RDrift => "r_drift",
            SenderPolicy::LDrift { .. } => "l_drift",
            SenderPolicy::Stationary { .. } => "stationary",
        }
    }
}

/// How the players value a segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Valuation<T> {
    /// The receiver waits; values follow the branch.
    Waiting(Branch<T>),
    /// The receiver acts immediately.
    Stopped(Action),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment<T> {
    pub lo: T,
    pub hi: T,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub policy: SenderPolicy<T>,
    pub valuation: Valuation<T>,
}

impl<T: Scalar> Segment<T> {
    pub fn contains(&self, p: T) -> bool {
        let above = if self.lo_closed { p >= self.lo } else { p > self.lo };
        let below = if self.hi_closed { p <= self.hi } else { p < self.hi };
        above && below
    }

    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }
}

/// A threshold belief, or the reason it does not exist for these parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Cutoff<T> {
    At(Root<T>),
    Undefined(String),
}

impl<T: Scalar> Cutoff<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            Cutoff::At(r) => Some(r.value),
            Cutoff::Undefined(_) => None,
        }
    }

    fn from_result(r: Result<Root<T>, CutoffError>) -> Self {
        match r {
            Ok(r) => Cutoff::At(r),
            Err(e) => Cutoff::Undefined(e.to_string()),
        }
    }

    fn exact(value: T) -> Self {
        Cutoff::At(Root { value, residual: T::zero() })
    }

    fn na(reason: &str) -> Self {
        Cutoff::Undefined(reason.to_owned())
    }
}

/// Every threshold belief relevant to a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSet<T> {
    pub p_low: Cutoff<T>,
    pub phat: Cutoff<T>,
    pub pbar: Cutoff<T>,
    pub eta: Cutoff<T>,
    pub xi1: Cutoff<T>,
    pub xi2: Cutoff<T>,
    pub pi_ell_l: Cutoff<T>,
    pub phi_ell_l: Cutoff<T>,
    pub pi_ell_r: Cutoff<T>,
    pub phi_ell_r: Cutoff<T>,
    pub pi0: Cutoff<T>,
    pub pi_lr: Cutoff<T>,
    pub pi_lr_low: Cutoff<T>,
    pub pi_lr_high: Cutoff<T>,
}

impl<T: Scalar> CutoffSet<T> {
    pub fn entries(&self) -> [(&'static str, &Cutoff<T>); 14] {
        [
            ("p_low", &self.p_low),
            ("phat", &self.phat),
            ("pbar", &self.pbar),
            ("eta", &self.eta),
            ("xi1", &self.xi1),
            ("xi2", &self.xi2),
            ("pi_ell_l", &self.pi_ell_l),
            ("phi_ell_l", &self.phi_ell_l),
            ("pi_ell_r", &self.pi_ell_r),
            ("phi_ell_r", &self.phi_ell_r),
            ("pi0", &self.pi0),
            ("pi_lr", &self.pi_lr),
            ("pi_lr_low", &self.pi_lr_low),
            ("pi_lr_high", &self.pi_lr_high),
        ]
    }
}

/// A named condition checked while constructing a profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Cutoff(#[from] CutoffError),
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("equilibrium conditions fail: {}", failed_names(.0))]
    Diagnostics(Vec<Diagnostic>),
}

fn failed_names(d: &[Diagnostic]) -> String {
    d.iter().filter(|d| !d.passed).map(|d| d.name).collect::<Vec<_>>().join(", ")
}

/// Resolution of the boundary `p* = eta`, where both regimes are equilibria
/// with identical payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnifeEdge {
    /// R-drift straight to `p*`.
    #[default]
    Direct,
    /// R-drift to `xi_1`, then stationary.
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions<T> {
    pub knife_edge: KnifeEdge,
    /// Distance from `eta` within which `knife_edge` applies.
    pub knife_edge_tol: T,
    /// Return the profile even when a diagnostic fails.
    pub allow_failed_diagnostics: bool,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        Self {
            knife_edge: KnifeEdge::Direct,
            knife_edge_tol: T::lit(1e-9),
            allow_failed_diagnostics: false,
        }
    }
}

/// A Markov strategy profile together with its value functions.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumProfile<T> {
    pub params: ModelParams<T>,
    pub case: Case,
    pub cutoffs: CutoffSet<T>,
    pub segments: Vec<Segment<T>>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Direction of a one-sided limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl<T: Scalar> EquilibriumProfile<T> {
    /// The segment containing `p`, clamped to `[0, 1]`.
    pub fn segment_at(&self, p: T) -> &Segment<T> {
        let p = p.max(T::zero()).min(T::one());
        self.segments
            .iter()
            .find(|s| s.contains(p))
            .unwrap_or_else(|| self.segments.last().expect("profile has segments"))
    }

    /// The segment governing beliefs just to one side of `p`.
    pub fn segment_beside(&self, p: T, side: Side) -> &Segment<T> {
        let hit = self.segments.iter().find(|s| match side {
            Side::Left => s.lo < p && p <= s.hi,
            Side::Right => s.lo <= p && p < s.hi,
        });
        hit.unwrap_or_else(|| self.segment_at(p))
    }

    pub fn policy_at(&self, p: T) -> (SenderPolicy<T>, ReceiverChoice) {
        let s = self.segment_at(p);
        (s.policy, choice(&s.valuation))
    }

    pub fn receiver_choice(&self, p: T) -> ReceiverChoice {
        choice(&self.segment_at(p).valuation)
    }

    pub fn sender_value(&self, p: T) -> Result<T, ValueError> {
        sender_on(&self.params, &self.segment_at(p).valuation, p)
    }

    pub fn receiver_value(&self, p: T) -> Result<T, ValueError> {
        receiver_on(&self.params, &self.segment_at(p).valuation, p)
    }

    /// Slope of the sender's value at `p` within its segment.
    pub fn sender_slope(&self, p: T) -> Result<T, ValueError> {
        slope_on(&self.params, &self.segment_at(p).valuation, p)
    }

    /// One-sided slope of the sender's value at `p`.
    pub fn sender_slope_side(&self, p: T, side: Side) -> Result<T, ValueError> {
        slope_on(&self.params, &self.segment_beside(p, side).valuation, p)
    }

    /// Waiting region as `(lo, hi)`; empty when `lo >= hi`.
    pub fn waiting_region(&self) -> (T, T) {
        let w: Vec<_> =
            self.segments.iter().filter(|s| matches!(s.valuation, Valuation::Waiting(_))).collect();
        match (w.first(), w.last()) {
            (Some(a), Some(b)) => (a.lo, b.hi),
            _ => (T::zero(), T::zero()),
        }
    }

    /// Whether `p` lies in the waiting region.
    pub fn is_waiting(&self, p: T) -> bool {
        self.receiver_choice(p) == ReceiverChoice::Wait
    }

    /// Boundaries between adjacent waiting segments.
    pub fn interior_cutoffs(&self) -> Vec<T> {
        let mut out: Vec<T> = Vec::new();
        for pair in self.segments.windows(2) {
            let both = matches!(pair[0].valuation, Valuation::Waiting(_))
                && matches!(pair[1].valuation, Valuation::Waiting(_));
            if both && out.last() != Some(&pair[0].hi) {
                out.push(pair[0].hi);
            }
        }
        out
    }

    /// Beliefs at which drift from both sides points inward.
    pub fn absorbing_points(&self) -> Vec<T> {
        self.segments
            .iter()
            .filter(|s| matches!(s.policy, SenderPolicy::Stationary { .. }) && s.lo == s.hi)
            .map(|s| s.lo)
            .collect()
    }

    pub fn failed_diagnostics(&self) -> Vec<&Diagnostic> {
        self.diagnostics.iter().filter(|d| !d.passed).collect()
    }
}

fn choice<T>(v: &Valuation<T>) -> ReceiverChoice {
    match v {
        Valuation::Waiting(_) => ReceiverChoice::Wait,
        Valuation::Stopped(a) => ReceiverChoice::Take(*a),
    }
}

fn sender_on<T: Scalar>(m: &ModelParams<T>, v: &Valuation<T>, p: T) -> Result<T, ValueError> {
    match v {
        Valuation::Waiting(b) => b.sender(m, p),
        Valuation::Stopped(Action::L) => Ok(T::zero()),
        Valuation::Stopped(Action::R) => Ok(m.v),
    }
}

fn receiver_on<T: Scalar>(m: &ModelParams<T>, v: &Valuation<T>, p: T) -> Result<T, ValueError> {
    match v {
        Valuation::Waiting(b) => b.receiver(m, p),
        Valuation::Stopped(a) => Ok(m.receiver_static(p, *a)),
    }
}

fn slope_on<T: Scalar>(m: &ModelParams<T>, v: &Valuation<T>, p: T) -> Result<T, ValueError> {
    match v {
        Valuation::Waiting(b) => b.sender_slope(m, p),
        Valuation::Stopped(_) => Ok(T::zero()),
    }
}

struct Builder<T> {
    segments: Vec<Segment<T>>,
}

impl<T: Scalar> Builder<T> {
    fn push(&mut self, lo: T, hi: T, closed: (bool, bool), policy: SenderPolicy<T>, valuation: Valuation<T>) {
        let s = Segment { lo, hi, lo_closed: closed.0, hi_closed: closed.1, policy, valuation };
        if !s.is_empty() {
            self.segments.push(s);
        }
    }
}

fn diag(name: &'static str, passed: bool, detail: String) -> Diagnostic {
    Diagnostic { name, passed, detail }
}

/// Solves for the equilibrium profile with default options.
pub fn solve_smpe<T: Scalar>(m: &ModelParams<T>) -> Result<EquilibriumProfile<T>, SolveError> {
    solve_smpe_with(m, SolveOptions::default())
}

pub fn solve_smpe_with<T: Scalar>(
    m: &ModelParams<T>,
    opts: SolveOptions<T>,
) -> Result<EquilibriumProfile<T>, SolveError> {
    let m = m.validate()?;
    let ps = m.p_star;
    let eta = cutoffs::eta::<T>();
    let at_edge = (ps - eta).abs() <= opts.knife_edge_tol;
    let interior = if at_edge { opts.knife_edge == KnifeEdge::Interior } else { ps > eta };
    let two = cutoffs::condition_two(&m);
    let case = match (two, interior) {
        (true, false) => Case::ReceiverBoundDirect,
        (true, true) => Case::ReceiverBoundInterior,
        (false, false) => Case::SenderBoundDirect,
        (false, true) => Case::SenderBoundInterior,
    };

    let xi = cutoffs::xi(ps);
    let x1 = xi.as_ref().ok().map(|x| x.0);
    let (q, rs) = match x1 {
        Some(x1) if interior => (x1, Branch::rs(&m, x1)?),
        _ => (ps, Branch::r(&m)),
    };

    let pbar = cutoffs::pbar(&m);
    let pi_ell_l = cutoffs::pi_ell_l(&m, ps);
    let phi_ell_l = cutoffs::phi_ell_l(&m);
    let phi_ell_r = cutoffs::phi_ell_r_on(&m, rs, q);
    let pi_ell_r = cutoffs::pi_ell_r_on(&m, rs, q);
    let phat = m.phat();

    let mut d = Vec::new();
    d.push(diag(
        "p_star_at_most_pbar",
        ps <= pbar.value,
        format!("p* = {ps}, pbar = {}", pbar.value),
    ));
    if interior {
        let x1 = x1.expect("interior regime has xi");
        let us = value::u_stationary(&m, x1)?;
        d.push(diag(
            "stationary_beats_acting_at_xi1",
            us > m.myopic(x1),
            format!("u_s(xi1) = {us}, myopic = {}", m.myopic(x1)),
        ));
        let vs = value::v_stationary(&m, x1)?;
        d.push(diag("stationary_value_positive_at_xi1", vs > T::zero(), format!("v_s(xi1) = {vs}")));
    }

    let mut b = Builder { segments: Vec::new() };
    let mut c_pi0 = Cutoff::na("defined only when the sender values persuasion more");
    let mut c_pi_lr = Cutoff::na("defined only in the sender-bound direct regime");
    let mut c_pi_lr_low = Cutoff::na("defined only in the sender-bound interior regime");
    let mut c_pi_lr_high = Cutoff::na("defined only in interior regimes");

    let high = if interior {
        let x1 = x1.expect("interior regime has xi");
        let r = if at_edge {
            Root { value: x1, residual: T::zero() }
        } else {
            cutoffs::pi_lr_high_at(&m, x1)?
        };
        c_pi_lr_high = Cutoff::At(r);
        d.push(diag(
            "pi_lr_high_inside_xi1_p_star",
            r.value >= x1 && r.value < ps,
            format!("xi1 = {x1}, pi_lr_high = {}", r.value),
        ));
        Some((x1, r.value))
    } else {
        None
    };

    let p_low;
    if two {
        let phi = phi_ell_r.clone()?;
        p_low = phi.value;
        let pir = pi_ell_r.clone()?;
        d.push(diag(
            "sender_value_positive_at_p_low",
            pir.value < p_low,
            format!("pi_ell_r = {}, p_low = {p_low}", pir.value),
        ));
        let v_low = rs.sender(&m, p_low)?;
        let pi0 = cutoffs::pi0(&m, p_low, v_low);
        c_pi0 = Cutoff::At(pi0);
        d.push(diag(
            "pi_ell_l_below_pi0_below_p_low",
            pi_ell_l.value < pi0.value && pi0.value < p_low,
            format!("pi_ell_l = {}, pi0 = {}, p_low = {p_low}", pi_ell_l.value, pi0.value),
        ));
        d.push(diag(
            "receiver_stops_below_pi0",
            pi0.value <= phi_ell_l.value,
            format!("pi0 = {}, phi_ell_l = {}", pi0.value, phi_ell_l.value),
        ));
        let stop_l = Valuation::Stopped(Action::L);
        b.push(T::zero(), pi_ell_l.value, (true, false), SenderPolicy::Pass, stop_l);
        b.push(pi_ell_l.value, pi0.value, (true, false), SenderPolicy::LDrift { target: ps }, stop_l);
        b.push(pi0.value, p_low, (true, false), SenderPolicy::LDrift { target: p_low }, stop_l);
        match high {
            None => {
                b.push(p_low, ps, (true, false), SenderPolicy::RDrift, Valuation::Waiting(rs));
            }
            Some((x1, hi)) => {
                push_interior(&mut b, &m, p_low, true, x1, hi)?;
            }
        }
    } else {
        p_low = pi_ell_l.value;
        let pir = pi_ell_r.as_ref().map(|r| r.value);
        d.push(diag(
            "pi_ell_l_below_pi_ell_r",
            pir.as_ref().is_ok_and(|&r| p_low < r),
            format!("pi_ell_l = {p_low}, pi_ell_r = {pir:?}"),
        ));
        b.push(T::zero(), p_low, (true, true), SenderPolicy::Pass, Valuation::Stopped(Action::L));
        let l = Branch::l(&m, p_low);
        match high {
            None => {
                let r = cutoffs::pi_lr(&m, p_low)?;
                c_pi_lr = Cutoff::At(r);
                d.push(diag(
                    "pi_lr_below_phat",
                    r.value < phat,
                    format!("pi_lr = {}, phat = {phat}", r.value),
                ));
                b.push(p_low, r.value, (false, false), SenderPolicy::LDrift { target: ps }, Valuation::Waiting(l));
                b.push(r.value, ps, (r.value > p_low, false), SenderPolicy::RDrift, Valuation::Waiting(rs));
            }
            Some((x1, hi)) => {
                let r = cutoffs::pi_lr_low_at(&m, p_low, x1)?;
                c_pi_lr_low = Cutoff::At(r);
                d.push(diag(
                    "pi_lr_low_below_xi1",
                    r.value < x1,
                    format!("pi_lr_low = {}, xi1 = {x1}", r.value),
                ));
                d.push(diag(
                    "pi_lr_low_below_phat",
                    r.value < phat,
                    format!("pi_lr_low = {}, phat = {phat}", r.value),
                ));
                b.push(p_low, r.value, (false, false), SenderPolicy::LDrift { target: ps }, Valuation::Waiting(l));
                push_interior(&mut b, &m, r.value, r.value > p_low, x1, hi)?;
            }
        }
    }
    b.push(ps, T::one(), (true, true), SenderPolicy::Pass, Valuation::Stopped(Action::R));
    d.push(diag("p_low_below_phat", p_low < phat, format!("p_low = {p_low}, phat = {phat}")));
    if let (true, Some(x1)) = (interior, x1) {
        d.push(diag("p_low_below_xi1", p_low < x1, format!("p_low = {p_low}, xi1 = {x1}")));
    }

    let (c_xi1, c_xi2) = match xi {
        Ok((a, b)) => (Cutoff::exact(a), Cutoff::exact(b)),
        Err(e) => (Cutoff::Undefined(e.to_string()), Cutoff::Undefined(e.to_string())),
    };
    let cutoffs = CutoffSet {
        p_low: Cutoff::exact(p_low),
        phat: Cutoff::exact(phat),
        pbar: Cutoff::At(pbar),
        eta: Cutoff::At(Root { value: eta, residual: cutoffs::eta_residual(eta)? }),
        xi1: c_xi1,
        xi2: c_xi2,
        pi_ell_l: Cutoff::At(pi_ell_l),
        phi_ell_l: Cutoff::At(phi_ell_l),
        pi_ell_r: Cutoff::from_result(pi_ell_r),
        phi_ell_r: Cutoff::from_result(phi_ell_r),
        pi0: c_pi0,
        pi_lr: c_pi_lr,
        pi_lr_low: c_pi_lr_low,
        pi_lr_high: c_pi_lr_high,
    };
    let profile = EquilibriumProfile { params: m, case, cutoffs, segments: b.segments, diagnostics: d };
    if !opts.allow_failed_diagnostics && !profile.failed_diagnostics().is_empty() {
        return Err(SolveError::Diagnostics(profile.diagnostics));
    }
    Ok(profile)
}

/// Waiting segments from `from` up to `p*` in the interior regimes:
/// R-drift to `xi_1`, stationary at `xi_1`, L-drift up to `high`, then
/// R-drift to `p*`.
fn push_interior<T: Scalar>(
    b: &mut Builder<T>,
    m: &ModelParams<T>,
    from: T,
    from_closed: bool,
    x1: T,
    high: T,
) -> Result<(), ValueError> {
    let ps = m.p_star;
    b.push(from, x1, (from_closed, false), SenderPolicy::RDrift, Valuation::Waiting(Branch::rs(m, x1)?));
    b.push(x1, x1, (true, true), SenderPolicy::Stationary { high: ps }, Valuation::Waiting(Branch::Stationary));
    b.push(x1, high, (false, false), SenderPolicy::LDrift { target: ps }, Valuation::Waiting(Branch::ls(m, x1)?));
    b.push(high, ps, (high > x1, false), SenderPolicy::RDrift, Valuation::Waiting(Branch::r(m)));
    Ok(())
}

/// Profile in which the receiver ignores the sender: `l` below `phat`,
/// `r` from `phat` on, and the sender L-drifts to `phat` only where that
/// is worth its cost.
pub fn no_persuasion_profile<T: Scalar>(m: &ModelParams<T>) -> Result<EquilibriumProfile<T>, SolveError> {
    let m = m.validate()?;
    let phat = m.phat();
    let low = cutoffs::pi_ell_l(&m, phat);
    let mut b = Builder { segments: Vec::new() };
    let stop_l = Valuation::Stopped(Action::L);
    b.push(T::zero(), low.value, (true, true), SenderPolicy::Pass, stop_l);
    b.push(low.value, phat, (false, false), SenderPolicy::LDrift { target: phat }, stop_l);
    b.push(phat, T::one(), (true, true), SenderPolicy::Pass, Valuation::Stopped(Action::R));
    let na = || Cutoff::na("not used without persuasion");
    let cutoffs = CutoffSet {
        p_low: Cutoff::At(low),
        phat: Cutoff::exact(phat),
        pbar: na(),
        eta: na(),
        xi1: na(),
        xi2: na(),
        pi_ell_l: Cutoff::At(low),
        phi_ell_l: na(),
        pi_ell_r: na(),
        phi_ell_r: na(),
        pi0: na(),
        pi_lr: na(),
        pi_lr_low: na(),
        pi_lr_high: na(),
    };
    Ok(EquilibriumProfile {
        params: m,
        case: Case::NoPersuasion,
        cutoffs,
        segments: b.segments,
        diagnostics: Vec::new(),
    })
}

/// Sender value of revealing the state fully with equal attention on both
/// targets; a lower bound on the best persuasion payoff.
pub fn full_revelation_value<T: Scalar>(m: &ModelParams<T>, p0: T) -> T {
    p0 * m.v - T::lit(2.0) * m.cost_scale()
}

/// Payoffs `(V, U)` of the equilibrium as attention costs vanish.
pub fn vanishing_cost_limit<T: Scalar>(m: &ModelParams<T>, p0: T) -> (T, T) {
    let ps = m.p_star;
    if p0 >= ps {
        return (m.v, m.u_r(p0));
    }
    let v = p0 / ps * m.v;
    let u = p0 / ps * m.u_r(ps) + (ps - p0) / ps * m.u_ll;
    (v, u)
}
