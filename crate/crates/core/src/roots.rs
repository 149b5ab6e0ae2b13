//! One-dimensional bracketed root finding.

use crate::error::{Error, Result};

/// Stopping rule for [`newton_bisect`]: stop once `|f| <= f_abs` or the
/// last step (or the bracket) is shorter than `x_abs`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub x_abs: f64,
    pub f_abs: f64,
}

/// Grows `hi` geometrically by `factor` until `f(hi)` has the opposite sign
/// of `f_lo`. Returns the new upper end.
pub fn expand_upward<F>(
    mut f: F,
    f_lo: f64,
    mut hi: f64,
    factor: f64,
    max_steps: u32,
    what: &'static str,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    for _ in 0..=max_steps {
        let f_hi = f(hi)?;
        if f_hi == 0.0 || (f_hi > 0.0) != (f_lo > 0.0) {
            return Ok(hi);
        }
        hi *= factor;
    }
    Err(Error::NoBracket { what, doublings: max_steps })
}

/// Newton's method safeguarded by bisection on a sign-changing bracket.
///
/// `f` returns the value and derivative. A Newton step that would leave the
/// bracket, or that fails to halve the previous step, is replaced by a
/// bisection step, so the iteration never does worse than bisection.
pub fn newton_bisect<F>(mut f: F, lo: f64, hi: f64, tol: Tolerance, max_iter: u32, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let (f_lo, _) = f(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let (f_hi, _) = f(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::NoBracket { what, doublings: 0 });
    }
    // orient so that f(neg) < 0 < f(pos)
    let (mut neg, mut pos) = if f_lo < 0.0 { (lo, hi) } else { (hi, lo) };

    let mut x = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    for _ in 0..max_iter {
        let (fx, dfx) = f(x)?;
        if fx.abs() <= tol.f_abs {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let newton_leaves = ((x - pos) * dfx - fx) * ((x - neg) * dfx - fx) > 0.0;
        let newton_slow = (2.0 * fx).abs() > (dx_old * dfx).abs();
        if newton_leaves || newton_slow || !dfx.is_finite() || dfx == 0.0 {
            dx_old = dx;
            dx = 0.5 * (pos - neg);
            x = neg + dx;
        } else {
            dx_old = dx;
            dx = fx / dfx;
            x -= dx;
        }
        if dx.abs() <= tol.x_abs || (pos - neg).abs() <= tol.x_abs {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { what, iterations: max_iter })
}
