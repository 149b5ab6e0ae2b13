//! Pointwise residual of the ruin HJB equation with the minimising
//! strategy substituted.

use crate::error::{Error, Result};
use crate::ruin::RuinSolution;

/// `max |λh − (rw − c(w))h' + δh'²/h''|` over `points`. Points at or above
/// a finite safe level contribute zero.
pub fn ode_residual(sol: &RuinSolution, points: &[f64]) -> Result<f64> {
    let m = sol.problem().market();
    let spec = sol.problem().consumption();
    let delta = sol.dual().constants().delta;
    let mut worst: f64 = 0.0;
    for &w in points {
        if !sol.safe_level().is_below(w) {
            continue;
        }
        let v = sol.h_eval(w)?;
        if v.h == 0.0 && v.h_prime == 0.0 {
            continue;
        }
        if !(v.h_double_prime > 0.0) {
            return Err(Error::Convexity { w, h_double_prime: v.h_double_prime });
        }
        let r =
            m.lambda * v.h - (m.r * w - spec.rate(w)) * v.h_prime + delta * v.h_prime * v.h_prime / v.h_double_prime;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}
