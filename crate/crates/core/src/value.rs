//! Minimum expected penalty of lifetime minimum wealth,
//! `V^f(w, m) = inf_π E[f(M_τd)]`, for nonincreasing nonnegative `f`.
//!
//! A penalty is a constant floor, a finite staircase of downward jumps and an
//! optional smooth part. With `f'` taken in the distributional sense,
//!
//! ```text
//! V^f(w, m) = f(m) − ∫_{−∞}^m f'(x) h(w)/h(x) dx
//! ```
//!
//! where each jump contributes `a_i h(w)/h(b_i)` exactly and only the
//! smooth part is integrated numerically.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::quad::adaptive_simpson;
use crate::ruin::RuinSolution;

/// Absolute tolerance for the quadrature of the smooth part.
pub const INTEGRAL_TOL: f64 = 1e-9;
/// The lower limit is pushed toward −∞ until the newest chunk adds less
/// than this fraction of the running total.
pub const TRUNCATION_RATIO: f64 = 1e-14;
pub const MAX_EXPANSIONS: u32 = 64;
const CHUNK_TOL: f64 = INTEGRAL_TOL / MAX_EXPANSIONS as f64;

/// A downward step of size `size` as the minimum falls to `level`: the
/// penalty includes `size` whenever `m ≤ level`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub level: f64,
    pub size: f64,
}

/// Smooth nonincreasing part of a penalty, zero above [`upper`](Self::upper).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothPenalty {
    /// `max(level − x, 0)`, the lifetime shortfall below `level`.
    Shortfall { level: f64 },
    /// `max(level − x, 0)^exponent` with `exponent ≥ 1`.
    PowerShortfall { level: f64, exponent: f64 },
}

impl SmoothPenalty {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            SmoothPenalty::Shortfall { level } => (level - x).max(0.0),
            SmoothPenalty::PowerShortfall { level, exponent } => math::powf((level - x).max(0.0), exponent),
        }
    }

    /// Left derivative `f'(x−)`, never positive.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            SmoothPenalty::Shortfall { level } => {
                if x <= level {
                    -1.0
                } else {
                    0.0
                }
            }
            SmoothPenalty::PowerShortfall { level, exponent } => {
                if x <= level {
                    -exponent * math::powf(level - x, exponent - 1.0)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            SmoothPenalty::Shortfall { level } | SmoothPenalty::PowerShortfall { level, .. } => level,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SmoothPenalty::Shortfall { level } if level.is_finite() => Ok(()),
            SmoothPenalty::PowerShortfall { level, exponent } if level.is_finite() && exponent >= 1.0 => Ok(()),
            _ => Err(Error::InvalidParams("smooth penalty needs a finite level and exponent >= 1")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyFunction {
    a0: f64,
    jumps: Vec<Jump>,
    smooth: Option<SmoothPenalty>,
}

impl PenaltyFunction {
    /// `jumps` must have strictly decreasing levels and positive sizes.
    pub fn new(a0: f64, jumps: Vec<Jump>, smooth: Option<SmoothPenalty>) -> Result<Self> {
        if !(a0 >= 0.0 && a0.is_finite()) {
            return Err(Error::InvalidParams("penalty floor a0 must be nonnegative"));
        }
        if jumps.iter().any(|j| !(j.size > 0.0 && j.size.is_finite() && j.level.is_finite())) {
            return Err(Error::InvalidParams("jump sizes must be positive"));
        }
        if jumps.windows(2).any(|p| !(p[0].level > p[1].level)) {
            return Err(Error::InvalidParams("jump levels must be strictly decreasing"));
        }
        if let Some(s) = &smooth {
            s.validate()?;
        }
        Ok(PenaltyFunction { a0, jumps, smooth })
    }

    /// `1_{m ≤ b}`.
    pub fn indicator(b: f64) -> Result<Self> {
        Self::new(0.0, alloc::vec![Jump { level: b, size: 1.0 }], None)
    }

    pub fn constant(a0: f64) -> Result<Self> {
        Self::new(a0, Vec::new(), None)
    }

    /// `max(b − m, 0)`.
    pub fn shortfall(b: f64) -> Result<Self> {
        Self::new(0.0, Vec::new(), Some(SmoothPenalty::Shortfall { level: b }))
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn smooth(&self) -> Option<&SmoothPenalty> {
        self.smooth.as_ref()
    }

    pub fn eval(&self, m: f64) -> f64 {
        let steps: f64 = self.jumps.iter().filter(|j| m <= j.level).map(|j| j.size).sum();
        self.a0 + steps + self.smooth.map_or(0.0, |s| s.value(m))
    }
}

/// Current wealth and running minimum, `m ≤ w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueQuery {
    pub w: f64,
    pub m: f64,
}

impl ValueQuery {
    pub fn new(w: f64, m: f64) -> Result<Self> {
        if !(m <= w) || !w.is_finite() || !m.is_finite() {
            return Err(Error::Domain { what: "running minimum must not exceed wealth", value: m });
        }
        Ok(ValueQuery { w, m })
    }
}

/// Probability of ruin at `b` before death given the query state.
pub fn value_indicator(sol: &RuinSolution, q: ValueQuery, b: f64) -> Result<f64> {
    if q.m <= b {
        return Ok(1.0);
    }
    sol.psi(q.w, b)
}

/// Exact value for a pure staircase penalty.
pub fn value_step(sol: &RuinSolution, q: ValueQuery, f: &PenaltyFunction) -> Result<f64> {
    if f.smooth.is_some() {
        return Err(Error::InvalidParams("value_step needs a penalty without a smooth part"));
    }
    step_part(sol, q, f)
}

fn step_part(sol: &RuinSolution, q: ValueQuery, f: &PenaltyFunction) -> Result<f64> {
    let mut v = f.a0;
    let mut h_w = None;
    for j in &f.jumps {
        if q.m <= j.level {
            v += j.size;
        } else {
            let hw = match h_w {
                Some(x) => x,
                None => *h_w.insert(sol.h_eval(q.w)?.h),
            };
            if hw > 0.0 {
                v += j.size * hw / sol.h_eval(j.level)?.h;
            }
        }
    }
    Ok(v)
}

/// Value for any penalty; the smooth part is integrated toward −∞ in
/// doubling chunks until the tail is negligible.
pub fn value_general(sol: &RuinSolution, q: ValueQuery, f: &PenaltyFunction) -> Result<f64> {
    let mut v = step_part(sol, q, f)?;
    let Some(smooth) = f.smooth else {
        return Ok(v);
    };
    v += smooth.value(q.m);
    let h_w = sol.h_eval(q.w)?.h;
    if h_w == 0.0 {
        return Ok(v);
    }
    let integrand = |x: f64| -> Result<f64> {
        let slope = smooth.derivative(x);
        if slope == 0.0 {
            return Ok(0.0);
        }
        Ok(-slope * h_w / sol.h_eval(x)?.h)
    };
    let top = q.m.min(smooth.upper());
    let mut total = 0.0;
    let (mut hi, mut len) = (top, 1.0);
    for _ in 0..MAX_EXPANSIONS {
        let lo = hi - len;
        let mid = 0.5 * (lo + hi);
        let rough = len / 6.0 * (integrand(lo)? + 4.0 * integrand(mid)? + integrand(hi)?);
        let chunk = adaptive_simpson(integrand, lo, hi, CHUNK_TOL.max(1e-13 * rough.abs()))?;
        total += chunk;
        if chunk.abs() <= TRUNCATION_RATIO * total.abs() {
            return Ok(v + total);
        }
        hi = lo;
        len *= 2.0;
    }
    Err(Error::Divergent { expansions: MAX_EXPANSIONS })
}
