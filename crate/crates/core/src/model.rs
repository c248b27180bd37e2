//! Primitives of the game: payoffs, the receiver's static problem and
//! Poisson information structures.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

/// Parameter validation failure. The message names the violated condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("parameter condition violated: {0}")]
    Violated(&'static str),
    #[error("information structure invalid: {0}")]
    Structure(&'static str),
}

/// Primitive parameters. `u_xy` is the receiver's payoff from action `x`
/// in state `y`, with actions `l`/`r` and states `L`/`R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams<T> {
    pub u_ll: T,
    pub u_rl: T,
    pub u_lr: T,
    pub u_rr: T,
    /// Sender's payoff when the receiver takes `r`.
    pub v: T,
    /// Flow cost of attention, shared by both players.
    pub c: T,
    /// Poisson arrival intensity of full attention.
    pub lambda: T,
    /// Sender's persuasion target; must exceed the myopic cutoff.
    pub p_star: T,
}

/// Receiver's terminal action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    L,
    R,
}

/// Receiver's decision at a belief.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReceiverChoice {
    Wait,
    Take(Action),
}

impl<T: Scalar> ModelParams<T> {
    /// Payoffs `u_ll = u_rr = 1`, `u_rl = u_lr = 0`, with `lambda = 1`.
    pub fn symmetric(v: T, c: T, p_star: T) -> Self {
        Self {
            u_ll: T::one(),
            u_rl: T::zero(),
            u_lr: T::zero(),
            u_rr: T::one(),
            v,
            c,
            lambda: T::one(),
            p_star,
        }
    }

    /// Checks the standing parameter restrictions, returning `self` on success.
    pub fn validate(self) -> Result<Self, ModelError> {
        let all = [
            self.u_ll, self.u_rl, self.u_lr, self.u_rr, self.v, self.c, self.lambda, self.p_star,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(ModelError::Violated("all parameters finite"));
        }
        if !(self.u_ll > self.u_rl.max(T::zero())) {
            return Err(ModelError::Violated("u_ll > max(u_rl, 0)"));
        }
        if !(self.u_rr > self.u_lr.max(T::zero())) {
            return Err(ModelError::Violated("u_rr > max(u_lr, 0)"));
        }
        if !(self.v > T::zero()) {
            return Err(ModelError::Violated("v > 0"));
        }
        if !(self.c > T::zero()) {
            return Err(ModelError::Violated("c > 0"));
        }
        if !(self.lambda > T::zero()) {
            return Err(ModelError::Violated("lambda > 0"));
        }
        if !(self.p_star > self.phat() && self.p_star < T::one()) {
            return Err(ModelError::Violated("phat < p_star < 1"));
        }
        Ok(self)
    }

    /// `c / lambda`, the scale of every cost term.
    pub fn cost_scale(&self) -> T {
        self.c / self.lambda
    }

    /// Expected payoff of action `a` at belief `p`.
    pub fn receiver_static(&self, p: T, a: Action) -> T {
        match a {
            Action::L => self.u_ell(p),
            Action::R => self.u_r(p),
        }
    }

    /// Expected payoff of `l` at belief `p`.
    pub fn u_ell(&self, p: T) -> T {
        p * self.u_lr + (T::one() - p) * self.u_ll
    }

    /// Expected payoff of `r` at belief `p`.
    pub fn u_r(&self, p: T) -> T {
        p * self.u_rr + (T::one() - p) * self.u_rl
    }

    /// Belief at which the receiver is indifferent between `l` and `r`.
    pub fn phat(&self) -> T {
        (self.u_ll - self.u_rl) / (self.u_rr - self.u_lr + self.u_ll - self.u_rl)
    }

    /// Myopic value `max(u_ell, u_r)`.
    pub fn myopic(&self, p: T) -> T {
        self.u_ell(p).max(self.u_r(p))
    }

    /// Myopically optimal action; ties go to `r`.
    pub fn myopic_action(&self, p: T) -> Action {
        if self.u_r(p) >= self.u_ell(p) {
            Action::R
        } else {
            Action::L
        }
    }

    /// `u_r(p*) - u_ell(p*)`, the receiver's gain from being persuaded.
    pub fn persuasion_gain(&self) -> T {
        self.u_r(self.p_star) - self.u_ell(self.p_star)
    }

    /// Converts every field into another scalar type.
    pub fn cast<S: Scalar>(&self) -> ModelParams<S> {
        let f = |x: T| S::lit(x.as_f64());
        ModelParams {
            u_ll: f(self.u_ll),
            u_rl: f(self.u_rl),
            u_lr: f(self.u_lr),
            u_rr: f(self.u_rr),
            v: f(self.v),
            c: f(self.c),
            lambda: f(self.lambda),
            p_star: f(self.p_star),
        }
    }
}

/// One Poisson experiment: attention share `weight` on news that moves the
/// belief to `target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Experiment<T> {
    pub weight: T,
    pub target: T,
}

impl<T: Scalar> Experiment<T> {
    /// Arrival rates at belief `p`; zero when the target equals `p`.
    pub fn rates(&self, lambda: T, p: T) -> JumpRates<T> {
        let gap = (self.target - p).abs();
        if gap == T::zero() {
            let z = T::zero();
            return JumpRates { target: self.target, in_l: z, in_r: z, unconditional: z };
        }
        let one = T::one();
        let s = self.weight * lambda / gap;
        JumpRates {
            target: self.target,
            in_l: s * p * (one - self.target),
            in_r: s * self.target * (one - p),
            unconditional: s * p * (one - p),
        }
    }
}

/// Arrival rates of one experiment's news.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpRates<T> {
    pub target: T,
    /// Rate when the state is `L`.
    pub in_l: T,
    /// Rate when the state is `R`.
    pub in_r: T,
    /// Rate under the current belief.
    pub unconditional: T,
}

/// Attention allocation across experiments. Total weight is at most one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InformationStructure<T> {
    experiments: Vec<Experiment<T>>,
}

impl<T: Scalar> InformationStructure<T> {
    pub fn new(experiments: Vec<Experiment<T>>) -> Result<Self, ModelError> {
        let mut total = T::zero();
        for e in &experiments {
            if !(e.weight >= T::zero()) || !e.weight.is_finite() {
                return Err(ModelError::Structure("weights must be non-negative"));
            }
            if !(e.target >= T::zero() && e.target <= T::one()) {
                return Err(ModelError::Structure("targets must lie in [0, 1]"));
            }
            total = total + e.weight;
        }
        if total > T::one() + T::epsilon() * T::lit(16.0) {
            return Err(ModelError::Structure("total weight exceeds one"));
        }
        Ok(Self { experiments })
    }

    /// No information.
    pub fn pass() -> Self {
        Self { experiments: Vec::new() }
    }

    /// Full attention on news that reveals state `L`.
    pub fn r_drift() -> Self {
        Self {
            experiments: vec![Experiment { weight: T::one(), target: T::zero() }],
        }
    }

    /// Full attention on news that moves the belief up to `target`.
    pub fn l_drift(target: T) -> Self {
        Self {
            experiments: vec![Experiment { weight: T::one(), target }],
        }
    }

    /// Equal attention on news towards `low` and towards `high`.
    pub fn stationary(low: T, high: T) -> Self {
        let half = T::lit(0.5);
        Self {
            experiments: vec![
                Experiment { weight: half, target: low },
                Experiment { weight: half, target: high },
            ],
        }
    }

    pub fn experiments(&self) -> &[Experiment<T>] {
        &self.experiments
    }

    pub fn total_weight(&self) -> T {
        self.experiments.iter().fold(T::zero(), |a, e| a + e.weight)
    }

    /// Whether any attention is paid (so the flow cost is incurred).
    pub fn is_active(&self) -> bool {
        self.experiments.iter().any(|e| e.weight > T::zero())
    }

    /// Weight on targets above `p` minus weight on targets below `p`.
    pub fn net_upward_weight(&self, p: T) -> T {
        self.experiments.iter().fold(T::zero(), |a, e| {
            if e.target > p {
                a + e.weight
            } else if e.target < p {
                a - e.weight
            } else {
                a
            }
        })
    }

    /// Belief drift absent news.
    pub fn drift_rate(&self, lambda: T, p: T) -> T {
        -self.net_upward_weight(p) * lambda * p * (T::one() - p)
    }

    /// Arrival rates of each experiment at belief `p`. Targets equal to `p`
    /// carry no news and get rate zero.
    pub fn jump_rates(&self, lambda: T, p: T) -> Vec<JumpRates<T>> {
        self.experiments.iter().map(|e| e.rates(lambda, p)).collect()
    }

    /// Sum of jump-size-weighted arrival rates plus drift; zero for every
    /// structure since beliefs are a martingale.
    pub fn martingale_defect(&self, lambda: T, p: T) -> T {
        self.jump_rates(lambda, p)
            .iter()
            .fold(self.drift_rate(lambda, p), |a, r| a + r.unconditional * (r.target - p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sym() -> ModelParams<f64> {
        ModelParams::symmetric(1.0, 0.01, 0.6)
    }

    #[test]
    fn static_payoffs() {
        let m = sym();
        assert_abs_diff_eq!(m.u_r(0.6), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(m.u_ell(0.6), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(m.myopic(0.3), 0.7, epsilon = 1e-15);
        assert_eq!(m.myopic_action(0.5), Action::R);
    }

    #[test]
    fn phat_asymmetric() {
        let m = ModelParams { u_ll: 2.0, u_rl: 0.0, u_lr: 0.0, u_rr: 1.0, ..sym() };
        assert_abs_diff_eq!(m.phat(), 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.u_ell(m.phat()), m.u_r(m.phat()), epsilon = 1e-15);
    }

    #[test]
    fn validation_names_condition() {
        assert!(sym().validate().is_ok());
        let bad = ModelParams { u_rl: 1.5, ..sym() };
        assert_eq!(bad.validate(), Err(ModelError::Violated("u_ll > max(u_rl, 0)")));
        let bad = ModelParams { p_star: 0.4, ..sym() };
        assert_eq!(bad.validate(), Err(ModelError::Violated("phat < p_star < 1")));
        let bad = ModelParams { c: 0.0, ..sym() };
        assert_eq!(bad.validate(), Err(ModelError::Violated("c > 0")));
    }

    #[test]
    fn r_drift_moves_up() {
        let i = InformationStructure::<f64>::r_drift();
        assert_abs_diff_eq!(i.drift_rate(1.0, 0.5), 0.25, epsilon = 1e-15);
        let r = i.jump_rates(1.0, 0.5)[0];
        assert_eq!(r.in_r, 0.0);
        assert_abs_diff_eq!(r.in_l, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn stationary_has_no_drift() {
        let i = InformationStructure::<f64>::stationary(0.0, 0.6);
        assert_eq!(i.drift_rate(1.0, 0.4), 0.0);
        assert_abs_diff_eq!(i.martingale_defect(1.0, 0.4), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn target_at_belief_is_silent() {
        let i = InformationStructure::<f64>::l_drift(0.4);
        assert_eq!(i.jump_rates(1.0, 0.4)[0].unconditional, 0.0);
        assert_eq!(i.drift_rate(1.0, 0.4), 0.0);
    }

    #[test]
    fn overweight_rejected() {
        let e = |w, q| Experiment { weight: w, target: q };
        assert!(InformationStructure::new(vec![e(0.7, 0.0), e(0.7, 1.0)]).is_err());
        assert!(InformationStructure::new(vec![e(0.5, 0.0), e(0.5, 1.0)]).is_ok());
        assert!(InformationStructure::new(vec![e(0.5, 1.2)]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let m = sym().cast::<f32>();
        assert!((m.phat() - 0.5).abs() < 1e-7);
    }
}
