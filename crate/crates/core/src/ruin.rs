//! The ruin function `h`, normalised by `h(0) = 1`, with
//! `ψ(w; b) = h(w)/h(b)` and the optimal investment
//! `π*(w) = −((μ − r)/σ²) h'(w)/h''(w)`.
//!
//! Below the kink `h` is recovered pointwise from the dual through
//! `h(w) = h̃(y) − w y` with `h̃'(y) = w`. Above the kink it has a closed
//! form, a power of `w + c̄/(ρ − r)` when ρ ≠ r and an exponential when
//! ρ = r, whose scale is fixed by matching values at κ.

use crate::dual::{DualFunction, DualValue};
use crate::error::{Error, Result};
use crate::math;
use crate::model::{Problem, Regime, SafeLevel};
use crate::roots::{self, Tolerance};

/// Residual bound for the dual inversion, relative to `max(1, |w|)`.
pub const INVERT_RESIDUAL_TOL: f64 = 1e-12;
const INVERT_MAX_DOUBLINGS: u32 = 1000;
const INVERT_MAX_ITERATIONS: u32 = 200;

/// `h` and its first two derivatives at one wealth level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue {
    pub h: f64,
    pub h_prime: f64,
    pub h_double_prime: f64,
}

impl HValue {
    const ZERO: HValue = HValue { h: 0.0, h_prime: 0.0, h_double_prime: 0.0 };
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuinSolution {
    dual: DualFunction,
    /// `h(κ)` from the dual side.
    h_kappa: f64,
}

impl RuinSolution {
    pub fn new(problem: &Problem) -> Result<Self> {
        Self::from_dual(DualFunction::new(problem)?)
    }

    pub fn from_dual(dual: DualFunction) -> Result<Self> {
        let s = dual.solution();
        let kappa = dual.problem().consumption().kappa;
        let h_kappa = dual.outer(s.y_kappa)?.value - kappa * s.y_kappa;
        Ok(RuinSolution { dual, h_kappa })
    }

    pub fn dual(&self) -> &DualFunction {
        &self.dual
    }

    pub fn problem(&self) -> &Problem {
        self.dual.problem()
    }

    pub fn regime(&self) -> Regime {
        self.dual.constants().regime
    }

    pub fn safe_level(&self) -> SafeLevel {
        self.dual.constants().w_safe
    }

    pub fn kappa(&self) -> f64 {
        self.problem().consumption().kappa
    }

    /// Scale of the closed form above the kink: `K1` in
    /// `h = K1 |w + c̄/(ρ − r)|^d`, or `K2` in `h = K2 exp(−(δ + λ) w / c̄)`.
    pub fn k_outer(&self) -> f64 {
        let kappa = self.kappa();
        match self.regime() {
            Regime::RhoEqual => self.h_kappa * math::exp(self.exp_rate() * kappa),
            _ => {
                let d = self.exponent();
                self.h_kappa / math::powf((kappa + self.shift()).abs(), d)
            }
        }
    }

    fn exponent(&self) -> f64 {
        self.dual.constants().d.unwrap_or(f64::NAN)
    }

    /// `c̄/(ρ − r)`.
    fn shift(&self) -> f64 {
        let m = self.problem().market();
        self.problem().consumption().c_bar / (m.rho - m.r)
    }

    /// `(δ + λ)/c̄`.
    fn exp_rate(&self) -> f64 {
        let m = self.problem().market();
        (self.dual.constants().delta + m.lambda) / self.problem().consumption().c_bar
    }

    /// `h̃'` below the kink, `D1 B1 y^(B1−1) + D2 B2 y^(B2−1) + (c̄ + ρκ)/r`.
    fn outer_slope(&self, y: f64) -> Result<(f64, f64)> {
        let v = self.dual.outer(y)?;
        Ok((v.slope, v.curvature))
    }

    /// The unique `y > y_κ` with `h̃'(y) = w`, for `w < κ`.
    pub fn invert_dual(&self, w: f64) -> Result<f64> {
        self.invert_dual_near(w, None)
    }

    /// As [`invert_dual`](Self::invert_dual), starting the bracket search
    /// from `hint` when given; used by the path simulator, where consecutive
    /// wealth levels are close.
    pub fn invert_dual_near(&self, w: f64, hint: Option<f64>) -> Result<f64> {
        let kappa = self.kappa();
        if !(w < kappa) {
            return Err(Error::Domain { what: "dual inversion needs w < kappa", value: w });
        }
        let yk = self.dual.solution().y_kappa;
        let f = |y: f64| self.outer_slope(y).map(|(s, c)| (s - w, c));
        let f_abs = 0.01 * INVERT_RESIDUAL_TOL * w.abs().max(1.0);

        // h̃' is decreasing, so f(y) > 0 below the root and < 0 above it.
        let (mut lo, mut hi) = (yk, 2.0 * yk);
        if let Some(h) = hint.filter(|h| *h > yk && h.is_finite()) {
            let fh = f(h)?.0;
            if fh == 0.0 {
                return Ok(h);
            }
            if fh > 0.0 {
                lo = h;
                hi = 1.25 * h;
            } else {
                let below = (h / 1.25).max(yk);
                if f(below)?.0 >= 0.0 {
                    lo = below;
                    hi = h;
                } else {
                    hi = h;
                }
            }
        }
        let mut doublings = 0;
        while f(hi)?.0 > 0.0 {
            lo = hi;
            hi *= 2.0;
            doublings += 1;
            if doublings > INVERT_MAX_DOUBLINGS {
                return Err(Error::NoBracket { what: "dual inversion", doublings });
            }
        }
        let tol = Tolerance { x_abs: 4.0 * f64::EPSILON * hi, f_abs };
        let y = roots::newton_bisect(f, lo, hi, tol, INVERT_MAX_ITERATIONS, "dual inversion")?;
        Ok(y)
    }

    /// `h, h', h''` at any real `w`.
    pub fn h_eval(&self, w: f64) -> Result<HValue> {
        let kappa = self.kappa();
        if !self.safe_level().is_below(w) {
            return Ok(HValue::ZERO);
        }
        if w < kappa {
            let y = self.invert_dual(w)?;
            return self.h_from_dual(w, y, self.dual.outer(y)?);
        }
        Ok(self.h_above_kink(w))
    }

    fn h_from_dual(&self, w: f64, y: f64, v: DualValue) -> Result<HValue> {
        if !(v.curvature < 0.0) {
            return Err(Error::Convexity { w, h_double_prime: -1.0 / v.curvature });
        }
        Ok(HValue { h: v.value - w * y, h_prime: -y, h_double_prime: -1.0 / v.curvature })
    }

    fn h_above_kink(&self, w: f64) -> HValue {
        let kappa = self.kappa();
        match self.regime() {
            Regime::RhoEqual => {
                let a = self.exp_rate();
                let h = self.h_kappa * math::exp(-a * (w - kappa));
                HValue { h, h_prime: -a * h, h_double_prime: a * a * h }
            }
            _ => {
                let d = self.exponent();
                let z = w + self.shift();
                let ratio = z / (kappa + self.shift());
                let h = self.h_kappa * math::exp(d * math::ln(ratio));
                HValue { h, h_prime: h * d / z, h_double_prime: h * d * (d - 1.0) / (z * z) }
            }
        }
    }

    /// Minimum probability of ruin at level `b` starting from `w ≥ b`.
    pub fn psi(&self, w: f64, b: f64) -> Result<f64> {
        if !self.safe_level().is_below(b) {
            return Err(Error::Domain { what: "ruin level must lie below the safe level", value: b });
        }
        if w < b {
            return Err(Error::Domain { what: "wealth below the ruin level", value: w });
        }
        if w == b {
            return Ok(1.0);
        }
        let hb = self.h_eval(b)?.h;
        Ok((self.h_eval(w)?.h / hb).clamp(0.0, 1.0))
    }

    /// Optimal amount in the risky asset at `w < w^s`; independent of the
    /// ruin level.
    pub fn pi_star(&self, w: f64) -> Result<f64> {
        self.pi_star_near(w, &mut None)
    }

    /// [`pi_star`](Self::pi_star) with a warm-start cache for the dual
    /// variable below the kink.
    pub fn pi_star_near(&self, w: f64, y_cache: &mut Option<f64>) -> Result<f64> {
        if !self.safe_level().is_below(w) {
            return Err(Error::Domain { what: "strategy undefined at or above the safe level", value: w });
        }
        let m = self.problem().market();
        let ratio = m.merton_ratio();
        if w >= self.kappa() {
            return Ok(match self.regime() {
                Regime::RhoEqual => ratio / self.exp_rate(),
                _ => ratio * (w + self.shift()) / (1.0 - self.exponent()),
            });
        }
        let y = self.invert_dual_near(w, *y_cache)?;
        *y_cache = Some(y);
        let v = self.dual.outer(y)?;
        Ok(-ratio * y * v.curvature)
    }
}
