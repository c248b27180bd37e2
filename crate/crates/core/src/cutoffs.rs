//! Threshold beliefs that delimit the equilibrium regions.
//!
//! Closed-form cutoffs are evaluated directly; the rest are roots of a
//! difference of value functions, located by bracketed bisection. Every
//! cutoff is returned with the residual of its defining equation.

use std::sync::OnceLock;

use thiserror::Error;

use crate::model::ModelParams;
use crate::scalar::Scalar;
use crate::value::{self, Branch, ValueError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CutoffError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("cutoff undefined: {0}")]
    Undefined(&'static str),
    #[error("required condition fails: {0}")]
    Condition(&'static str),
    #[error(transparent)]
    Value(#[from] ValueError),
}

/// Stopping rule for [`bisect`]. Iteration ends when the bracket is no wider
/// than `x_tol`, when `|f| <= f_tol`, or when the bracket stops shrinking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectOptions<T> {
    pub x_tol: T,
    pub f_tol: Option<T>,
    pub max_iter: usize,
}

impl<T: Scalar> Default for BisectOptions<T> {
    fn default() -> Self {
        Self { x_tol: T::lit(1e-12), f_tol: None, max_iter: 300 }
    }
}

/// A located root and the value of its defining function there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root<T> {
    pub value: T,
    pub residual: T,
}

/// Bisection on a bracketing interval.
pub fn bisect<T: Scalar>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    opts: BisectOptions<T>,
) -> Result<T, CutoffError> {
    bisect_try(|x| Ok(f(x)), lo, hi, opts).map(|r| r.value)
}

/// Bisection for a fallible function, returning the root with its residual.
pub fn bisect_try<T: Scalar>(
    mut f: impl FnMut(T) -> Result<T, ValueError>,
    lo: T,
    hi: T,
    opts: BisectOptions<T>,
) -> Result<Root<T>, CutoffError> {
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a)?, f(b)?);
    if fa == T::zero() {
        return Ok(Root { value: a, residual: fa });
    }
    if fb == T::zero() {
        return Ok(Root { value: b, residual: fb });
    }
    if !(fa.signum() != fb.signum()) {
        return Err(CutoffError::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: fa.as_f64(),
            f_hi: fb.as_f64(),
        });
    }
    let a_positive = fa > T::zero();
    let (mut best, mut best_f) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let two = T::lit(2.0);
    for _ in 0..opts.max_iter {
        if (b - a).abs() <= opts.x_tol {
            break;
        }
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm.abs() <= best_f.abs() {
            best = mid;
            best_f = fm;
        }
        if fm == T::zero() || opts.f_tol.is_some_and(|t| fm.abs() <= t) {
            return Ok(Root { value: mid, residual: fm });
        }
        if (fm > T::zero()) == a_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Root { value: best, residual: best_f })
}

/// Bisects on the first sign change of `f` on a grid over `[lo, hi]` that is
/// uniform in the bulk and geometrically refined towards `hi`.
fn first_crossing<T: Scalar>(
    mut f: impl FnMut(T) -> Result<T, ValueError>,
    lo: T,
    hi: T,
    opts: BisectOptions<T>,
) -> Result<Root<T>, CutoffError> {
    let n = 256;
    let width = hi - lo;
    let mut grid: Vec<T> = (0..=n).map(|i| lo + width * T::lit(i as f64 / n as f64)).collect();
    let mut tail = T::lit(1.0 / n as f64);
    while tail > T::epsilon() * T::lit(4.0) {
        tail = tail * T::lit(0.1);
        grid.push(hi - width * tail);
    }
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite grid"));
    grid.dedup();
    let mut prev = (grid[0], f(grid[0])?);
    for &x in &grid[1..] {
        let fx = f(x)?;
        if fx == T::zero() {
            return Ok(Root { value: x, residual: fx });
        }
        if prev.1.signum() != fx.signum() && prev.1 != T::zero() {
            return bisect_try(&mut f, prev.0, x, opts);
        }
        prev = (x, fx);
    }
    Err(CutoffError::NoSignChange {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        f_lo: f(lo)?.as_f64(),
        f_hi: prev.1.as_f64(),
    })
}

/// Tangency points of the stationary and R-drift value functions,
/// defined for `p* >= 8/9`.
pub fn xi<T: Scalar>(p_star: T) -> Result<(T, T), CutoffError> {
    let a = T::lit(0.75) * p_star;
    let disc = a * a - p_star / T::lit(2.0);
    if p_star < T::lit(8.0 / 9.0) && disc < -T::epsilon() {
        return Err(CutoffError::Undefined("xi requires p* >= 8/9"));
    }
    let d = disc.max(T::zero()).sqrt();
    Ok((a - d, a + d))
}

/// Difference between stationary and R-drift costs at `xi_1(x)` with
/// `c = lambda = 1`; `eta` is its unique root on `(8/9, 1)`.
pub fn eta_residual<T: Scalar>(x: T) -> Result<T, CutoffError> {
    let unit = ModelParams::symmetric(T::one(), T::one(), x);
    let (x1, _) = xi(x)?;
    Ok(value::c_stationary(&unit, x1)? - value::c_plus(&unit, x1, x)?)
}

static ETA: OnceLock<f64> = OnceLock::new();

/// Threshold on `p*` above which stationary play at `xi_1` beats R-drift.
/// A universal constant, computed once per process.
pub fn eta<T: Scalar>() -> T {
    let e = *ETA.get_or_init(|| {
        let opts = BisectOptions { x_tol: 1e-15, ..Default::default() };
        let f = |x: f64| eta_residual(x).map_err(|_| unreachable_domain());
        bisect_try(f, 8.0 / 9.0, 1.0 - 1e-9, opts)
            .expect("eta is bracketed on (8/9, 1)")
            .value
    });
    T::lit(e)
}

fn unreachable_domain() -> ValueError {
    ValueError::Domain { function: "eta", p: f64::NAN, requirement: "8/9 <= x < 1" }
}

/// Belief above which waiting under R-drift is worth less than taking `r`.
pub fn pbar<T: Scalar>(m: &ModelParams<T>) -> Root<T> {
    let gap = m.u_ll - m.u_rl;
    let value = T::one() - m.c / (m.lambda * gap);
    Root { value, residual: m.lambda * (T::one() - value) * gap - m.c }
}

/// Lowest belief from which L-drift towards `target` is worth its cost to a
/// sender who is paid `v` at `target` and nothing otherwise.
pub fn pi_ell_l<T: Scalar>(m: &ModelParams<T>, target: T) -> Root<T> {
    let half = T::lit(0.5);
    let a = half + m.c / (T::lit(2.0) * m.lambda * m.v);
    let value = a - (a * a - m.c * target / (m.lambda * m.v)).sqrt();
    let residual = m.lambda * value * (T::one() - value) * m.v / (target - value) - m.c;
    Root { value, residual }
}

/// Belief at which the receiver is indifferent between `l` and full
/// attention to news towards `0` and `p*`.
pub fn phi_ell_l<T: Scalar>(m: &ModelParams<T>) -> Root<T> {
    let du = m.persuasion_gain();
    let (c, l, ps) = (m.c, m.lambda, m.p_star);
    let s = c + l * du;
    let value = (s - (s * s - T::lit(4.0) * l * c * du * ps).sqrt()) / (T::lit(2.0) * l * du);
    let residual = du - (ps - value) / (value * (T::one() - value)) * m.cost_scale();
    Root { value, residual }
}

/// Whether R-drift to `p*` is preferred to stationary play (`p* <= eta`).
pub fn condition_one<T: Scalar>(m: &ModelParams<T>) -> bool {
    m.p_star <= eta::<T>()
}

/// Whether the sender values persuasion more than the receiver resents it.
pub fn condition_two<T: Scalar>(m: &ModelParams<T>) -> bool {
    m.v > m.persuasion_gain()
}

/// Absorbing target of R-drift: `p*` when R-drift is preferred, else `xi_1`.
pub fn q_r<T: Scalar>(m: &ModelParams<T>) -> Result<T, CutoffError> {
    if condition_one(m) {
        Ok(m.p_star)
    } else {
        Ok(xi(m.p_star)?.0)
    }
}

/// The R-drift branch that ends at [`q_r`].
pub fn rs_branch<T: Scalar>(m: &ModelParams<T>) -> Result<Branch<T>, CutoffError> {
    let q = q_r(m)?;
    if q == m.p_star {
        Ok(Branch::r(m))
    } else {
        Ok(Branch::rs(m, q)?)
    }
}

/// Belief at which the receiver is indifferent between `l` and waiting
/// through R-drift.
pub fn phi_ell_r<T: Scalar>(m: &ModelParams<T>) -> Result<Root<T>, CutoffError> {
    phi_ell_r_on(m, rs_branch(m)?, q_r(m)?)
}

/// [`phi_ell_r`] for an explicit R-drift branch ending at `q`.
pub fn phi_ell_r_on<T: Scalar>(
    m: &ModelParams<T>,
    b: Branch<T>,
    q: T,
) -> Result<Root<T>, CutoffError> {
    let end = b.receiver(m, q)?;
    if !(end > m.u_ell(q)) {
        return Err(CutoffError::Condition("receiver value at the R-drift target exceeds u_ell"));
    }
    bisect_try(|p| Ok(m.u_ell(p) - b.receiver(m, p)?), T::zero(), q, BisectOptions::default())
}

/// Belief at which the sender's R-drift value is zero.
pub fn pi_ell_r<T: Scalar>(m: &ModelParams<T>) -> Result<Root<T>, CutoffError> {
    pi_ell_r_on(m, rs_branch(m)?, q_r(m)?)
}

/// [`pi_ell_r`] for an explicit R-drift branch ending at `q`.
pub fn pi_ell_r_on<T: Scalar>(
    m: &ModelParams<T>,
    b: Branch<T>,
    q: T,
) -> Result<Root<T>, CutoffError> {
    if !(b.sender(m, q)? > T::zero()) {
        return Err(CutoffError::Condition("sender value at the R-drift target is positive"));
    }
    bisect_try(|p| b.sender(m, p), T::zero(), q, BisectOptions::default())
}

/// Switch from L-drift to R-drift when `p* <= eta`: the crossing of the
/// L-drift value anchored at `p_low` with the R-drift value. Equals `p_low`
/// when R-drift is already profitable there.
pub fn pi_lr<T: Scalar>(m: &ModelParams<T>, p_low: T) -> Result<Root<T>, CutoffError> {
    if !condition_one(m) {
        return Err(CutoffError::Undefined("pi_lr requires p* <= eta"));
    }
    let r = Branch::r(m);
    let r_low = r.sender(m, p_low)?;
    if r_low >= T::zero() {
        return Ok(Root { value: p_low, residual: r_low });
    }
    let l = Branch::l(m, p_low);
    first_crossing(
        |p| Ok(l.sender(m, p)? - r.sender(m, p)?),
        p_low,
        m.p_star,
        BisectOptions::default(),
    )
}

/// Switch from L-drift to R-drift below `xi_1` when `p* > eta`. Equals
/// `p_low` when R-drift is already profitable there.
pub fn pi_lr_low<T: Scalar>(m: &ModelParams<T>, p_low: T) -> Result<Root<T>, CutoffError> {
    if condition_one(m) {
        return Err(CutoffError::Undefined("pi_lr_low requires p* > eta"));
    }
    pi_lr_low_at(m, p_low, xi(m.p_star)?.0)
}

/// [`pi_lr_low`] with the stationary point `x1` supplied by the caller.
pub fn pi_lr_low_at<T: Scalar>(m: &ModelParams<T>, p_low: T, x1: T) -> Result<Root<T>, CutoffError> {
    let rs = Branch::rs(m, x1)?;
    let rs_low = rs.sender(m, p_low)?;
    if rs_low >= T::zero() {
        return Ok(Root { value: p_low, residual: rs_low });
    }
    let l = Branch::l(m, p_low);
    if !(l.sender(m, x1)? < value::v_stationary(m, x1)?) {
        return Err(CutoffError::Condition("L-drift value at xi_1 is below the stationary value"));
    }
    bisect_try(|p| Ok(l.sender(m, p)? - rs.sender(m, p)?), p_low, x1, BisectOptions::default())
}

/// Switch from L-drift back to R-drift above `xi_1` when `p* > eta`.
pub fn pi_lr_high<T: Scalar>(m: &ModelParams<T>) -> Result<Root<T>, CutoffError> {
    if condition_one(m) {
        return Err(CutoffError::Undefined("pi_lr_high requires p* > eta"));
    }
    pi_lr_high_at(m, xi(m.p_star)?.0)
}

/// [`pi_lr_high`] with the stationary point `x1` supplied by the caller.
pub fn pi_lr_high_at<T: Scalar>(m: &ModelParams<T>, x1: T) -> Result<Root<T>, CutoffError> {
    let ls = Branch::ls(m, x1)?;
    let r = Branch::r(m);
    let f = |p| Ok(r.sender(m, p)? - ls.sender(m, p)?);
    // Both sides coincide at xi_1; start the scan just above it.
    let start = x1 + (m.p_star - x1) * T::lit(1e-6);
    first_crossing(f, start, m.p_star, BisectOptions::default())
}

/// Lowest belief at which L-drift to `p_low` beats L-drift to `p*` for a
/// sender whose value at `p_low` is `v_low`.
pub fn pi0<T: Scalar>(m: &ModelParams<T>, p_low: T, v_low: T) -> Root<T> {
    let value = (p_low * m.v - m.p_star * v_low) / (m.v - v_low);
    let chord = v_low + (m.v - v_low) * (value - p_low) / (m.p_star - p_low);
    Root { value, residual: chord }
}

/// Crossings of the R-drift and stationary values on either side of
/// `xi_1`, for `p* > eta`.
pub fn pi_sr<T: Scalar>(m: &ModelParams<T>) -> Result<(Root<T>, Root<T>), CutoffError> {
    if condition_one(m) {
        return Err(CutoffError::Undefined("pi_sr requires p* > eta"));
    }
    let (x1, x2) = xi(m.p_star)?;
    let r = Branch::r(m);
    let f = |p| Ok(r.sender(m, p)? - value::v_stationary(m, p)?);
    let opts = BisectOptions::default();
    Ok((bisect_try(f, T::zero(), x1, opts)?, bisect_try(f, x1, x2, opts)?))
}
