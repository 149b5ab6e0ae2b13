//! Elementary functions routed through `libm` so the crate builds without std.

use crate::error::{Error, Result};

/// Largest natural-log magnitude accepted for an intermediate power.
pub(crate) const MAX_LOG_MAGNITUDE: f64 = 700.0;

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// `coef * exp(exponent * ln_base)`, rejecting results whose log-magnitude
/// leaves `±MAX_LOG_MAGNITUDE`.
#[inline]
pub(crate) fn scaled_power(coef: f64, exponent: f64, ln_base: f64, what: &'static str) -> Result<f64> {
    if coef == 0.0 {
        return Ok(0.0);
    }
    let e = exponent * ln_base;
    let log_magnitude = ln(coef.abs()) + e;
    if e.abs() <= MAX_LOG_MAGNITUDE && log_magnitude.abs() <= MAX_LOG_MAGNITUDE {
        return Ok(coef * exp(e));
    }
    if !(log_magnitude.abs() <= MAX_LOG_MAGNITUDE) {
        // Underflow toward zero is harmless; only blow-ups are errors.
        if log_magnitude < -MAX_LOG_MAGNITUDE {
            return Ok(0.0);
        }
        return Err(Error::Overflow { what, log_magnitude });
    }
    Ok(coef.signum() * exp(log_magnitude))
}

/// Roots of `a x² + b x + c = 0` with `a > 0` and `c < 0`, returned as
/// `(positive, negative)`. The larger-magnitude root is computed first and
/// the other recovered from the product `c / a`.
pub(crate) fn opposite_sign_roots(a: f64, b: f64, c: f64) -> (f64, f64) {
    debug_assert!(a > 0.0 && c < 0.0);
    let disc = sqrt(b * b - 4.0 * a * c);
    let q = if b >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
    let r1 = q / a;
    let r2 = c / q;
    if r1 > r2 {
        (r1, r2)
    } else {
        (r2, r1)
    }
}
