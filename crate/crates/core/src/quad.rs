//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

/// Recursion depth at which a subinterval is declared unresolved.
pub const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by adaptive
/// Simpson with Richardson extrapolation. Integrand errors propagate.
pub fn adaptive_simpson<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&mut f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn step<F>(f: &mut F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || (m - a).abs() <= f64::EPSILON * m.abs().max(1.0) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence { what: "adaptive Simpson", iterations: MAX_DEPTH });
    }
    let l = step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}
