//! Market, mortality and consumption parameters and the scalar constants
//! derived from them.
//!
//! Wealth evolves as
//!
//! ```text
//! dW = [r W + (μ − r) π − c(W)] dt + σ π dB
//! ```
//!
//! with death at an independent exponential time of rate λ, and
//! consumption `c(w) = (c̄ + ρκ) + ρ (w − κ)₊`. All rates are per year.

use crate::error::{Error, Result};
use crate::math;

/// Relative width of the band around `ρ = r` treated as the equal-rate
/// regime. Inside it the unequal-rate closed forms lose all precision.
pub const REGIME_EQUAL_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarketParams {
    /// Riskless rate.
    pub r: f64,
    /// Drift of the risky asset.
    pub mu: f64,
    /// Volatility of the risky asset.
    pub sigma: f64,
    /// Hazard rate of death.
    pub lambda: f64,
    /// Consumption slope above the kink (the subjective discount rate of
    /// the equivalent utility maximiser).
    pub rho: f64,
}

impl MarketParams {
    /// `½ ((μ − r)/σ)²`.
    pub fn delta(&self) -> f64 {
        let sharpe = (self.mu - self.r) / self.sigma;
        0.5 * sharpe * sharpe
    }

    /// `(μ − r)/σ²`, the factor in front of every feedback strategy.
    pub fn merton_ratio(&self) -> f64 {
        (self.mu - self.r) / (self.sigma * self.sigma)
    }
}

/// Piecewise-linear consumption: constant `c̄ + ρκ` below `κ`, slope `ρ` above.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConsumptionSpec {
    pub c_bar: f64,
    pub kappa: f64,
    pub rho: f64,
}

impl ConsumptionSpec {
    /// Consumption rate below the kink.
    pub fn floor_rate(&self) -> f64 {
        self.c_bar + self.rho * self.kappa
    }

    pub fn rate(&self, w: f64) -> f64 {
        consumption_rate(self, w)
    }
}

pub fn consumption_rate(spec: &ConsumptionSpec, w: f64) -> f64 {
    spec.floor_rate() + spec.rho * (w - spec.kappa).max(0.0)
}

/// Wealth at which consumption can be financed risklessly forever.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SafeLevel {
    Finite(f64),
    Unbounded,
}

impl SafeLevel {
    pub fn is_finite(&self) -> bool {
        matches!(self, SafeLevel::Finite(_))
    }

    /// `true` when `w` lies strictly below the safe level.
    pub fn is_below(&self, w: f64) -> bool {
        match *self {
            SafeLevel::Finite(ws) => w < ws,
            SafeLevel::Unbounded => true,
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            SafeLevel::Finite(ws) => ws,
            SafeLevel::Unbounded => f64::INFINITY,
        }
    }
}

pub fn safe_level(spec: &ConsumptionSpec, r: f64) -> SafeLevel {
    match regime_of(r, spec.rho) {
        Regime::RhoLess => SafeLevel::Finite(spec.c_bar / (r - spec.rho)),
        Regime::RhoGreater | Regime::RhoEqual => SafeLevel::Unbounded,
    }
}

/// Which of the three analytic branches applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Regime {
    /// ρ > r: safe level infinite, investment increasing above the kink.
    RhoGreater,
    /// ρ = r: safe level infinite, constant investment above the kink.
    RhoEqual,
    /// ρ < r: finite safe level, investment decreasing above the kink.
    RhoLess,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::RhoGreater => "RhoGreater",
            Regime::RhoEqual => "RhoEqual",
            Regime::RhoLess => "RhoLess",
        }
    }
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn regime_of(r: f64, rho: f64) -> Regime {
    if (rho - r).abs() <= REGIME_EQUAL_BAND * r.abs().max(rho.abs()) {
        Regime::RhoEqual
    } else if rho > r {
        Regime::RhoGreater
    } else {
        Regime::RhoLess
    }
}

/// A validated (market, consumption) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    market: MarketParams,
    consumption: ConsumptionSpec,
}

impl Problem {
    pub fn new(market: MarketParams, consumption: ConsumptionSpec) -> Result<Self> {
        validate(&market, &consumption)?;
        Ok(Problem { market, consumption })
    }

    pub fn market(&self) -> &MarketParams {
        &self.market
    }

    pub fn consumption(&self) -> &ConsumptionSpec {
        &self.consumption
    }

    pub fn constants(&self) -> DerivedConstants {
        derive_constants(&self.market, &self.consumption)
    }
}

/// Checks every parameter invariant, reporting the first one violated.
pub fn validate(m: &MarketParams, c: &ConsumptionSpec) -> Result<()> {
    let all = [m.r, m.mu, m.sigma, m.lambda, m.rho, c.c_bar, c.kappa, c.rho];
    if all.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParams("all parameters must be finite"));
    }
    let checks: [(bool, &'static str); 9] = [
        (m.r > 0.0, "r must be positive"),
        (m.mu > m.r, "mu must exceed r"),
        (m.sigma > 0.0, "sigma must be positive"),
        (m.lambda > 0.0, "lambda must be positive"),
        (m.rho > 0.0, "rho must be positive"),
        (c.rho == m.rho, "consumption rho must equal market rho"),
        (c.kappa > 0.0, "kappa must be positive"),
        (c.floor_rate() > 0.0, "c_bar + rho*kappa must be positive"),
        (c.floor_rate() > m.r * c.kappa, "c_bar + rho*kappa must exceed r*kappa"),
    ];
    match checks.iter().find(|(ok, _)| !ok) {
        Some(&(_, msg)) => Err(Error::InvalidParams(msg)),
        None => Ok(()),
    }
}

/// Constants shared by every later stage.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivedConstants {
    pub delta: f64,
    /// Positive root of `δB² − (r − λ + δ)B − λ = 0`; always > 1.
    pub b1: f64,
    /// Negative root of the same quadratic.
    pub b2: f64,
    /// Positive root of `δB² − (r − ρ − λ + δ)B − λ = 0`.
    pub bhat1: f64,
    /// Negative root of the same quadratic.
    pub bhat2: f64,
    /// `B̂1/(B̂1 − 1)`; absent when ρ = r.
    pub d: Option<f64>,
    pub w_safe: SafeLevel,
    pub regime: Regime,
}

pub fn derive_constants(m: &MarketParams, c: &ConsumptionSpec) -> DerivedConstants {
    let delta = m.delta();
    let (b1, b2) = math::opposite_sign_roots(delta, -(m.r - m.lambda + delta), -m.lambda);
    let regime = regime_of(m.r, m.rho);
    let (bhat1, bhat2) = match regime {
        // exact roots at ρ = r; avoids a root at 1 ± rounding
        Regime::RhoEqual => (1.0, -m.lambda / delta),
        _ => math::opposite_sign_roots(delta, -(m.r - m.rho - m.lambda + delta), -m.lambda),
    };
    let d = match regime {
        Regime::RhoEqual => None,
        _ => Some(bhat1 / (bhat1 - 1.0)),
    };
    DerivedConstants { delta, b1, b2, bhat1, bhat2, d, w_safe: safe_level(c, m.r), regime }
}

/// The exponent `d` through the explicit square-root expression, used as an
/// independent check on `B̂1/(B̂1 − 1)`.
pub fn exponent_closed_form(m: &MarketParams) -> Option<f64> {
    if regime_of(m.r, m.rho) == Regime::RhoEqual {
        return None;
    }
    let gap = m.r - m.rho;
    let s = gap + m.lambda + m.delta();
    Some((s + math::sqrt(s * s + 4.0 * (m.rho - m.r) * m.lambda)) / (2.0 * gap))
}
