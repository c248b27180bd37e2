//! Closed-form value functions along each belief-drift regime.
//!
//! Costs `C` are expected attention costs until absorption; values are
//! expected terminal payoffs net of `C`. The `plus` family solves the
//! sender's equation under R-drift (belief drifts up, news reveals `L`),
//! the `minus` family under L-drift (belief drifts down, news jumps to
//! `p*`), and `stationary` splits attention equally between `0` and `p*`.

use thiserror::Error;

use crate::model::ModelParams;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValueError {
    #[error("{function}: belief {p} outside its domain ({requirement})")]
    Domain {
        function: &'static str,
        p: f64,
        requirement: &'static str,
    },
}

fn domain<T: Scalar>(function: &'static str, p: T, requirement: &'static str) -> ValueError {
    ValueError::Domain { function, p: p.as_f64(), requirement }
}

fn check_plus<T: Scalar>(f: &'static str, p: T, q: T) -> Result<(), ValueError> {
    if !(q > T::zero() && q < T::one()) {
        return Err(domain(f, q, "0 < q < 1"));
    }
    if !(p >= T::zero() && p <= q) {
        return Err(domain(f, p, "0 <= p <= q"));
    }
    Ok(())
}

fn check_minus<T: Scalar>(m: &ModelParams<T>, f: &'static str, p: T, q: T) -> Result<(), ValueError> {
    if !(q > T::zero() && q < m.p_star) {
        return Err(domain(f, q, "0 < q < p*"));
    }
    if !(p >= q && p < m.p_star) {
        return Err(domain(f, p, "q <= p < p*"));
    }
    Ok(())
}

/// Expected cost of R-drift from `p` until the belief reaches `q` or jumps to 0.
/// Continuous at `p = 0` with value `c / lambda`.
pub fn c_plus<T: Scalar>(m: &ModelParams<T>, p: T, q: T) -> Result<T, ValueError> {
    check_plus("c_plus", p, q)?;
    let one = T::one();
    if p == T::zero() {
        return Ok(m.cost_scale());
    }
    let odds = (q / (one - q)) * ((one - p) / p);
    Ok((p * odds.ln() + one - p / q) * m.cost_scale())
}

pub fn c_plus_slope<T: Scalar>(m: &ModelParams<T>, p: T, q: T) -> Result<T, ValueError> {
    check_plus("c_plus_slope", p, q)?;
    if p == T::zero() {
        return Err(domain("c_plus_slope", p, "p > 0"));
    }
    let one = T::one();
    let odds = (q / (one - q)) * ((one - p) / p);
    Ok((odds.ln() - one / (one - p) - one / q) * m.cost_scale())
}

/// Sender value under R-drift towards `q` with continuation `x` at `q`.
pub fn v_plus<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    Ok(p / q * x - c_plus(m, p, q)?)
}

pub fn v_plus_slope<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    Ok(x / q - c_plus_slope(m, p, q)?)
}

/// Second derivative of [`v_plus`]; independent of `q` and `x`.
pub fn v_plus_curvature<T: Scalar>(m: &ModelParams<T>, p: T) -> T {
    let one = T::one();
    m.cost_scale() / (p * (one - p) * (one - p))
}

/// Receiver value under R-drift towards `q` with continuation `x` at `q`.
pub fn u_plus<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    Ok((q - p) / q * m.u_ll + p / q * x - c_plus(m, p, q)?)
}

pub fn u_plus_slope<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    Ok((x - m.u_ll) / q - c_plus_slope(m, p, q)?)
}

fn minus_log_term<T: Scalar>(ps: T, p: T, q: T) -> T {
    let one = T::one();
    ps * ((one - q) / (one - p)).ln() + (one - ps) * (q / p).ln() - ((ps - q) / (ps - p)).ln()
}

/// Expected cost of L-drift from `p` until the belief falls to `q` or jumps to `p*`.
pub fn c_minus<T: Scalar>(m: &ModelParams<T>, p: T, q: T) -> Result<T, ValueError> {
    check_minus(m, "c_minus", p, q)?;
    let ps = m.p_star;
    let k = m.cost_scale() / (ps * (T::one() - ps));
    Ok(-k * (ps - p) * minus_log_term(ps, p, q))
}

pub fn c_minus_slope<T: Scalar>(m: &ModelParams<T>, p: T, q: T) -> Result<T, ValueError> {
    check_minus(m, "c_minus_slope", p, q)?;
    let one = T::one();
    let ps = m.p_star;
    let k = m.cost_scale() / (ps * (one - ps));
    let g = minus_log_term(ps, p, q);
    let g_slope = ps / (one - p) - (one - ps) / p - one / (ps - p);
    Ok(k * g - k * (ps - p) * g_slope)
}

/// Sender value under L-drift towards `q` with continuation `x` at `q`.
pub fn v_minus<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    let ps = m.p_star;
    Ok((p - q) / (ps - q) * m.v + (ps - p) / (ps - q) * x - c_minus(m, p, q)?)
}

pub fn v_minus_slope<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    Ok((m.v - x) / (m.p_star - q) - c_minus_slope(m, p, q)?)
}

/// Second derivative of [`v_minus`]; independent of `q` and `x`.
pub fn v_minus_curvature<T: Scalar>(m: &ModelParams<T>, p: T) -> T {
    let one = T::one();
    let ps = m.p_star;
    let gap = ps - p;
    (gap * gap + ps * (one - ps)) / (p * p * (one - p) * (one - p) * gap) * m.cost_scale()
}

/// Receiver value under L-drift towards `q` with continuation `x` at `q`.
pub fn u_minus<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    let ps = m.p_star;
    Ok((p - q) / (ps - q) * m.u_r(ps) + (ps - p) / (ps - q) * x - c_minus(m, p, q)?)
}

pub fn u_minus_slope<T: Scalar>(m: &ModelParams<T>, p: T, q: T, x: T) -> Result<T, ValueError> {
    Ok((m.u_r(m.p_star) - x) / (m.p_star - q) - c_minus_slope(m, p, q)?)
}

fn check_stationary<T: Scalar>(f: &'static str, p: T) -> Result<(), ValueError> {
    if !(p >= T::zero() && p < T::one()) {
        return Err(domain(f, p, "0 <= p < 1"));
    }
    Ok(())
}

/// Expected cost of the stationary strategy with targets `0` and `p*`.
pub fn c_stationary<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    check_stationary("c_stationary", p)?;
    let ps = m.p_star;
    Ok(T::lit(2.0) * m.cost_scale() * (ps - p) / (ps * (T::one() - p)))
}

pub fn c_stationary_slope<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    check_stationary("c_stationary_slope", p)?;
    let one = T::one();
    let ps = m.p_star;
    Ok(-T::lit(2.0) * m.cost_scale() * (one - ps) / (ps * (one - p) * (one - p)))
}

pub fn v_stationary<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    Ok(p / m.p_star * m.v - c_stationary(m, p)?)
}

pub fn v_stationary_slope<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    Ok(m.v / m.p_star - c_stationary_slope(m, p)?)
}

pub fn v_stationary_curvature<T: Scalar>(m: &ModelParams<T>, p: T) -> T {
    let one = T::one();
    let ps = m.p_star;
    let d = one - p;
    T::lit(4.0) * m.cost_scale() * (one - ps) / (ps * d * d * d)
}

pub fn u_stationary<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    let ps = m.p_star;
    Ok((ps - p) / ps * m.u_ll + p / ps * m.u_r(ps) - c_stationary(m, p)?)
}

pub fn u_stationary_slope<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    let ps = m.p_star;
    Ok((m.u_r(ps) - m.u_ll) / ps - c_stationary_slope(m, p)?)
}

/// Expected cost when the receiver pays full attention to news towards
/// both `0` and `p*`.
pub fn c_full_attention<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    check_stationary("c_full_attention", p)?;
    let ps = m.p_star;
    Ok((ps - p) / (ps * (T::one() - p)) * m.cost_scale())
}

/// Upper bound on the sender's value from the relaxed problem.
pub fn v_full_attention<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    Ok((p / m.p_star * m.v - c_full_attention(m, p)?).max(T::zero()))
}

/// Receiver's value in the relaxed problem.
pub fn u_full_attention<T: Scalar>(m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
    let ps = m.p_star;
    Ok((ps - p) / ps * m.u_ll + p / ps * m.u_r(ps) - c_full_attention(m, p)?)
}

/// One smooth piece of an equilibrium value function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Branch<T> {
    /// R-drift towards `target`, where the players continue with
    /// `sender_end` and `receiver_end`.
    Plus { target: T, sender_end: T, receiver_end: T },
    /// L-drift towards `base` with continuations `sender_base` and
    /// `receiver_base`; news moves the belief to `p*`.
    Minus { base: T, sender_base: T, receiver_base: T },
    /// Stationary split between `0` and `p*`.
    Stationary,
}

impl<T: Scalar> Branch<T> {
    /// R-drift all the way to `p*`.
    pub fn r(m: &ModelParams<T>) -> Self {
        Branch::Plus { target: m.p_star, sender_end: m.v, receiver_end: m.u_r(m.p_star) }
    }

    /// R-drift towards `q`, then stationary at `q`.
    pub fn rs(m: &ModelParams<T>, q: T) -> Result<Self, ValueError> {
        Ok(Branch::Plus {
            target: q,
            sender_end: v_stationary(m, q)?,
            receiver_end: u_stationary(m, q)?,
        })
    }

    /// L-drift towards `p_low`, where the receiver takes `l`.
    pub fn l(m: &ModelParams<T>, p_low: T) -> Self {
        Branch::Minus { base: p_low, sender_base: T::zero(), receiver_base: m.u_ell(p_low) }
    }

    /// L-drift towards `q`, then stationary at `q`.
    pub fn ls(m: &ModelParams<T>, q: T) -> Result<Self, ValueError> {
        Ok(Branch::Minus {
            base: q,
            sender_base: v_stationary(m, q)?,
            receiver_base: u_stationary(m, q)?,
        })
    }

    pub fn sender(&self, m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
        match *self {
            Branch::Plus { target, sender_end, .. } => v_plus(m, p, target, sender_end),
            Branch::Minus { base, sender_base, .. } => v_minus(m, p, base, sender_base),
            Branch::Stationary => v_stationary(m, p),
        }
    }

    pub fn sender_slope(&self, m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
        match *self {
            Branch::Plus { target, sender_end, .. } => v_plus_slope(m, p, target, sender_end),
            Branch::Minus { base, sender_base, .. } => v_minus_slope(m, p, base, sender_base),
            Branch::Stationary => v_stationary_slope(m, p),
        }
    }

    pub fn receiver(&self, m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
        match *self {
            Branch::Plus { target, receiver_end, .. } => u_plus(m, p, target, receiver_end),
            Branch::Minus { base, receiver_base, .. } => u_minus(m, p, base, receiver_base),
            Branch::Stationary => u_stationary(m, p),
        }
    }

    pub fn receiver_slope(&self, m: &ModelParams<T>, p: T) -> Result<T, ValueError> {
        match *self {
            Branch::Plus { target, receiver_end, .. } => u_plus_slope(m, p, target, receiver_end),
            Branch::Minus { base, receiver_base, .. } => u_minus_slope(m, p, base, receiver_base),
            Branch::Stationary => u_stationary_slope(m, p),
        }
    }

    pub fn sender_curvature(&self, m: &ModelParams<T>, p: T) -> T {
        match *self {
            Branch::Plus { .. } => v_plus_curvature(m, p),
            Branch::Minus { .. } => v_minus_curvature(m, p),
            Branch::Stationary => v_stationary_curvature(m, p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn base() -> ModelParams<f64> {
        ModelParams::symmetric(1.0, 0.01, 0.6)
    }

    // Fourth-order Runge-Kutta integration of the L-drift equation
    // V' = (v - V)/(p* - p) - c/(lambda p (1 - p)) from (q, x) to p.
    fn rk4_minus(m: &ModelParams<f64>, q: f64, x: f64, p: f64, steps: usize) -> f64 {
        let f = |s: f64, y: f64| (m.v - y) / (m.p_star - s) - m.c / (m.lambda * s * (1.0 - s));
        let h = (p - q) / steps as f64;
        let (mut s, mut y) = (q, x);
        for _ in 0..steps {
            let k1 = f(s, y);
            let k2 = f(s + h / 2.0, y + h / 2.0 * k1);
            let k3 = f(s + h / 2.0, y + h / 2.0 * k2);
            let k4 = f(s + h, y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            s += h;
        }
        y
    }

    fn fd(f: impl Fn(f64) -> f64, p: f64, h: f64) -> f64 {
        (f(p + h) - f(p - h)) / (2.0 * h)
    }

    #[test]
    fn plus_cost_reference_values() {
        let m = base();
        assert_abs_diff_eq!(c_plus(&m, 0.3, 0.6).unwrap(), 0.008758288905486104, epsilon = 1e-15);
        assert_abs_diff_eq!(v_plus(&m, 0.3, 0.6, 1.0).unwrap(), 0.4912417110945139, epsilon = 1e-15);
        assert_abs_diff_eq!(c_plus(&m, 0.6, 0.6).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn plus_cost_limit_at_zero() {
        let m = base();
        assert_eq!(c_plus(&m, 0.0, 0.6).unwrap(), 0.01);
        assert_abs_diff_eq!(c_plus(&m, 1e-12, 0.6).unwrap(), 0.01, epsilon = 1e-10);
    }

    #[test]
    fn stationary_reference_values() {
        let m = base();
        assert_abs_diff_eq!(v_stationary(&m, 0.5).unwrap(), 0.8266666666666667, epsilon = 1e-14);
        assert_abs_diff_eq!(u_stationary(&m, 0.5).unwrap(), 0.66, epsilon = 1e-14);
        assert_abs_diff_eq!(v_stationary(&m, 0.0).unwrap(), -0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(v_stationary(&m, 0.6).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn minus_matches_rk4() {
        let m = base();
        let closed = v_minus(&m, 0.4, 0.2, 0.0).unwrap();
        assert_abs_diff_eq!(closed, rk4_minus(&m, 0.2, 0.0, 0.4, 20_000), epsilon = 1e-8);
        assert_abs_diff_eq!(closed, 0.49335169325572624, epsilon = 1e-14);
    }

    #[test]
    fn minus_boundary_value() {
        let m = base();
        assert_abs_diff_eq!(v_minus(&m, 0.2, 0.2, 0.3).unwrap(), 0.3, epsilon = 1e-15);
        assert!(c_minus(&m, 0.6, 0.2).is_err());
    }

    #[test]
    fn slopes_match_finite_differences() {
        let m = base();
        for &p in &[0.05, 0.3, 0.45] {
            let h = 1e-6;
            let s = |x| v_plus(&m, x, 0.6, 1.0).unwrap();
            assert_abs_diff_eq!(v_plus_slope(&m, p, 0.6, 1.0).unwrap(), fd(s, p, h), epsilon = 1e-7);
            let s = |x| u_plus(&m, x, 0.6, 0.6).unwrap();
            assert_abs_diff_eq!(u_plus_slope(&m, p, 0.6, 0.6).unwrap(), fd(s, p, h), epsilon = 1e-7);
            let s = |x| v_minus(&m, x, 0.01, 0.0).unwrap();
            assert_abs_diff_eq!(v_minus_slope(&m, p, 0.01, 0.0).unwrap(), fd(s, p, h), epsilon = 1e-6);
            let s = |x| u_minus(&m, x, 0.01, 0.99).unwrap();
            assert_abs_diff_eq!(u_minus_slope(&m, p, 0.01, 0.99).unwrap(), fd(s, p, h), epsilon = 1e-6);
            let s = |x| v_stationary(&m, x).unwrap();
            assert_abs_diff_eq!(v_stationary_slope(&m, p).unwrap(), fd(s, p, h), epsilon = 1e-7);
            let s = |x| u_stationary(&m, x).unwrap();
            assert_abs_diff_eq!(u_stationary_slope(&m, p).unwrap(), fd(s, p, h), epsilon = 1e-7);
        }
    }

    #[test]
    fn curvatures_match_finite_differences() {
        let m = base();
        let h = 1e-4;
        for &p in &[0.1, 0.3, 0.5] {
            let d2 = |f: &dyn Fn(f64) -> f64| (f(p + h) - 2.0 * f(p) + f(p - h)) / (h * h);
            let vp = |x| v_plus(&m, x, 0.6, 1.0).unwrap();
            assert_abs_diff_eq!(v_plus_curvature(&m, p), d2(&vp), epsilon = 1e-5);
            let vm = |x| v_minus(&m, x, 0.05, 0.0).unwrap();
            assert_abs_diff_eq!(v_minus_curvature(&m, p), d2(&vm), epsilon = 1e-5);
            let vs = |x| v_stationary(&m, x).unwrap();
            assert_abs_diff_eq!(v_stationary_curvature(&m, p), d2(&vs), epsilon = 1e-5);
        }
    }

    #[test]
    fn sender_equations_hold() {
        let m = base();
        let (c, l, v, ps) = (m.c, m.lambda, m.v, m.p_star);
        for &p in &[0.1, 0.3, 0.55] {
            let vp = v_plus(&m, p, 0.6, 1.0).unwrap();
            let dp = v_plus_slope(&m, p, 0.6, 1.0).unwrap();
            assert_abs_diff_eq!(-l * (1.0 - p) * vp + l * p * (1.0 - p) * dp, c, epsilon = 1e-14);
            let vm = v_minus(&m, p, 0.05, 0.0).unwrap();
            let dm = v_minus_slope(&m, p, 0.05, 0.0).unwrap();
            assert_abs_diff_eq!(l * p * (1.0 - p) * ((v - vm) / (ps - p) - dm), c, epsilon = 1e-13);
            let up = u_plus(&m, p, 0.6, 0.6).unwrap();
            let dup = u_plus_slope(&m, p, 0.6, 0.6).unwrap();
            assert_abs_diff_eq!(l * (1.0 - p) * (m.u_ll - up) + l * p * (1.0 - p) * dup, c, epsilon = 1e-14);
        }
    }

    #[test]
    fn full_attention_dominates() {
        let m = base();
        for i in 1..120 {
            let p = i as f64 * 0.005;
            let fa = v_full_attention(&m, p).unwrap();
            assert!(fa >= v_plus(&m, p, 0.6, 1.0).unwrap() - 1e-15);
            assert!(fa >= v_stationary(&m, p).unwrap() - 1e-15);
            if p > 0.02 {
                assert!(fa >= v_minus(&m, p, 0.02, 0.0).unwrap() - 1e-15);
            }
        }
    }

    #[test]
    fn branch_named_constructors() {
        let m = base();
        let r = Branch::r(&m);
        assert_abs_diff_eq!(r.sender(&m, 0.3).unwrap(), 0.4912417110945139, epsilon = 1e-15);
        assert_abs_diff_eq!(r.receiver(&m, 0.3).unwrap(), 0.7912417110945139, epsilon = 1e-14);
        assert_abs_diff_eq!(r.sender(&m, 0.0).unwrap(), -0.01, epsilon = 1e-15);
        let l = Branch::l(&m, 0.1);
        assert_abs_diff_eq!(l.sender(&m, 0.1).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(l.receiver(&m, 0.1).unwrap(), 0.9, epsilon = 1e-15);
    }

    #[test]
    fn single_precision_agrees() {
        let m = base().cast::<f32>();
        let x = v_plus(&m, 0.3f32, 0.6, 1.0).unwrap();
        assert!((x as f64 - 0.4912417110945139).abs() < 1e-6);
    }
}
