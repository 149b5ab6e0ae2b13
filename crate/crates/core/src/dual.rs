//! The concave dual `h̃(y) = min_w [h(w) + w y]` of the ruin function.
//!
//! Under the dual transform the ruin HJB becomes a linear Euler-type ODE on
//! each side of `y_κ = −h'(κ)`:
//!
//! ```text
//! y > y_κ (w < κ):  h̃(y) = D1 y^B1 + D2 y^B2 + ((c̄ + ρκ)/r) y
//! y < y_κ (w > κ):  h̃(y) = D̂1 y^B̂1 − (c̄/(ρ − r)) y          (ρ ≠ r)
//!                    h̃(y) = D̂1 y − (c̄/(δ + λ)) y ln y         (ρ = r)
//! ```
//!
//! The coefficient of the second inner solution vanishes because
//! `h̃(0) = 0`. The five unknowns `y0, y_κ, D1, D2, D̂1` are fixed by
//! `h̃'(y0) = 0`, `h̃(y0) = 1`, `h̃'(y_κ±) = κ` and continuity of `h̃` at
//! `y_κ`. Eliminating `D̂1` and `D1, D2` leaves a scalar equation in the
//! ratio `y0/y_κ`, which is monotone and has a unique root above 1.

use crate::error::{Error, Result};
use crate::math;
use crate::model::{DerivedConstants, Problem, Regime};
use crate::roots::{self, Tolerance};

/// Doublings of `ln(y0/y_κ)` allowed when bracketing the ratio root.
pub const MAX_RATIO_DOUBLINGS: u32 = 10;
/// Largest `ln(y0/y_κ)` accepted.
const MAX_LN_RATIO: f64 = 700.0;
/// Iteration cap for the ratio root-finder.
pub const MAX_RATIO_ITERATIONS: u32 = 200;
/// Absolute step tolerance on `ln(y0/y_κ)`.
pub const RATIO_X_TOL: f64 = 1e-14;
/// Residual bound for the ratio equation, relative to `max(1, rhs)`.
pub const RATIO_RESIDUAL_TOL: f64 = 1e-12;

/// Solved constants of the dual boundary-value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DualSolution {
    /// `−h'(0)`.
    pub y0: f64,
    /// `−h'(κ)`.
    pub y_kappa: f64,
    #[cfg_attr(feature = "serde", serde(rename = "D1"))]
    pub d1: f64,
    #[cfg_attr(feature = "serde", serde(rename = "D2"))]
    pub d2: f64,
    #[cfg_attr(feature = "serde", serde(rename = "Dhat1"))]
    pub dhat1: f64,
    pub regime: Regime,
}

/// `h̃` and its first two derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualValue {
    pub value: f64,
    pub slope: f64,
    pub curvature: f64,
}

/// Coefficients of the kink conditions with `y_κ` scaled out:
/// `D1 = α1 y_κ^(1−B1)`, `D2 = α2 y_κ^(1−B2)`, and `h̃(y_κ) = P y_κ`.
#[derive(Debug, Clone, Copy)]
struct KinkMatching {
    /// `(c̄ + ρκ)/r`.
    linear: f64,
    alpha1: f64,
    alpha2: f64,
}

fn kink_matching(problem: &Problem, k: &DerivedConstants) -> KinkMatching {
    let m = problem.market();
    let c = problem.consumption();
    let linear = c.floor_rate() / m.r;
    let kappa = c.kappa;
    // inner h̃(y_κ)/y_κ once D̂1 is eliminated through h̃'(y_κ−) = κ
    let p = match k.regime {
        Regime::RhoEqual => kappa + c.c_bar / (k.delta + m.lambda),
        _ => {
            let g = c.c_bar / (m.rho - m.r);
            (kappa + g) / k.bhat1 - g
        }
    };
    // outer: B1 u1 + B2 u2 = (κ − A) y_κ and u1 + u2 = (P − A) y_κ
    let spread = k.b1 - k.b2;
    let alpha1 = ((kappa - linear) - k.b2 * (p - linear)) / spread;
    let alpha2 = (k.b1 * (p - linear) - (kappa - linear)) / spread;
    KinkMatching { linear, alpha1, alpha2 }
}

/// Left-hand side of the ratio equation at `x = y0/y_κ`. Its root against
/// `(c̄ + ρκ)/r` gives the ratio. At `x = 1` it equals `(c̄ + ρκ)/r − κ`.
pub fn ratio_equation_lhs(problem: &Problem, constants: &DerivedConstants, x: f64) -> f64 {
    let km = kink_matching(problem, constants);
    ratio_lhs_and_slope(&km, constants, x).0
}

fn ratio_lhs_and_slope(km: &KinkMatching, k: &DerivedConstants, x: f64) -> (f64, f64) {
    let t1 = km.alpha1 * math::powf(x, k.b1 - 2.0);
    let t2 = km.alpha2 * math::powf(x, k.b2 - 2.0);
    let value = -(k.b1 * t1 + k.b2 * t2) * x;
    let slope = -(k.b1 * (k.b1 - 1.0) * t1 + k.b2 * (k.b2 - 1.0) * t2);
    (value, slope)
}

/// The unique root `x* > 1` of the ratio equation, found in `t = ln x` so
/// that slowly growing cases (`B1` close to 1) still bracket.
pub fn solve_ratio(problem: &Problem, constants: &DerivedConstants) -> Result<f64> {
    let km = kink_matching(problem, constants);
    let rhs = km.linear;
    let g = |t: f64| {
        let x = math::exp(t);
        let (v, s) = ratio_lhs_and_slope(&km, constants, x);
        (v - rhs, s * x)
    };
    let f_lo = g(0.0).0;
    let mut t_hi = roots::expand_upward(|t| Ok(g(t).0), f_lo, 1.0, 2.0, MAX_RATIO_DOUBLINGS, "ratio equation")?;
    if t_hi > MAX_LN_RATIO {
        if (g(MAX_LN_RATIO).0 > 0.0) == (f_lo > 0.0) {
            return Err(Error::NoBracket { what: "ratio equation", doublings: MAX_RATIO_DOUBLINGS });
        }
        t_hi = MAX_LN_RATIO;
    }
    let scale = rhs.abs().max(1.0);
    let tol = Tolerance { x_abs: RATIO_X_TOL, f_abs: 0.01 * RATIO_RESIDUAL_TOL * scale };
    let t = roots::newton_bisect(|t| Ok(g(t)), 0.0, t_hi, tol, MAX_RATIO_ITERATIONS, "ratio equation")?;
    let x = math::exp(t);
    if g(t).0.abs() > RATIO_RESIDUAL_TOL * scale {
        return Err(Error::NoConvergence { what: "ratio equation residual", iterations: MAX_RATIO_ITERATIONS });
    }
    Ok(x)
}

/// Solves for `(y0, y_κ, D1, D2, D̂1)`.
pub fn solve_boundary_system(problem: &Problem, constants: &DerivedConstants) -> Result<DualSolution> {
    solve_scaled(problem, constants).map(|(s, _)| s)
}

/// Coefficients with `y_κ` scaled out, `D_i y_κ^(B_i − 1)` and
/// `D̂1 y_κ^(B̂1 − 1)`. They stay representable when `D2` itself underflows.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Scaled {
    ln_yk: f64,
    outer: [f64; 2],
    inner: f64,
}

impl Scaled {
    fn from_solution(s: &DualSolution, k: &DerivedConstants) -> Result<Self> {
        let ln_yk = math::ln(s.y_kappa);
        let inner = match k.regime {
            Regime::RhoEqual => s.dhat1,
            _ => math::scaled_power(s.dhat1, k.bhat1 - 1.0, ln_yk, "Dhat1")?,
        };
        Ok(Scaled {
            ln_yk,
            outer: [
                math::scaled_power(s.d1, k.b1 - 1.0, ln_yk, "D1")?,
                math::scaled_power(s.d2, k.b2 - 1.0, ln_yk, "D2")?,
            ],
            inner,
        })
    }

    /// `ln(y/y_κ)`.
    fn ln_t(&self, y: f64, y_kappa: f64) -> f64 {
        let q = y / y_kappa;
        if q.is_normal() {
            math::ln(q)
        } else {
            math::ln(y) - self.ln_yk
        }
    }
}

fn solve_scaled(problem: &Problem, constants: &DerivedConstants) -> Result<(DualSolution, Scaled)> {
    let km = kink_matching(problem, constants);
    let k = constants;
    let x = solve_ratio(problem, constants)?;
    let inv_y0 = km.alpha1 * math::powf(x, k.b1 - 1.0) + km.alpha2 * math::powf(x, k.b2 - 1.0) + km.linear;
    let y0 = 1.0 / inv_y0;
    if !(y0 > 0.0 && y0.is_finite()) {
        return Err(Error::Domain { what: "y0 from the normalisation h(0) = 1", value: y0 });
    }
    let y_kappa = y0 / x;
    let ln_yk = math::ln(y_kappa);
    let d1 = math::scaled_power(km.alpha1, 1.0 - k.b1, ln_yk, "D1")?;
    let d2 = math::scaled_power(km.alpha2, 1.0 - k.b2, ln_yk, "D2")?;
    let c = problem.consumption();
    let m = problem.market();
    let (dhat1, inner) = match k.regime {
        Regime::RhoEqual => {
            let v = c.kappa + c.c_bar / (k.delta + m.lambda) * (ln_yk + 1.0);
            (v, v)
        }
        _ => {
            let g = c.c_bar / (m.rho - m.r);
            let beta = (c.kappa + g) / k.bhat1;
            (math::scaled_power(beta, 1.0 - k.bhat1, ln_yk, "Dhat1")?, beta)
        }
    };
    let solution = DualSolution { y0, y_kappa, d1, d2, dhat1, regime: k.regime };
    Ok((solution, Scaled { ln_yk, outer: [km.alpha1, km.alpha2], inner }))
}

/// Relative residuals of the five conditions that fix the dual constants.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundaryResiduals {
    /// `h̃'(y0) = 0`
    pub slope_at_y0: f64,
    /// `h̃(y0) = 1`
    pub value_at_y0: f64,
    /// `h̃'(y_κ+) = κ`
    pub outer_slope_at_kink: f64,
    /// `h̃'(y_κ−) = κ`
    pub inner_slope_at_kink: f64,
    /// continuity of `h̃` at `y_κ`
    pub continuity_at_kink: f64,
}

impl BoundaryResiduals {
    pub fn max(&self) -> f64 {
        [
            self.slope_at_y0,
            self.value_at_y0,
            self.outer_slope_at_kink,
            self.inner_slope_at_kink,
            self.continuity_at_kink,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn relative(terms: &[f64], rhs: f64) -> f64 {
    let sum: f64 = terms.iter().sum();
    let scale = terms.iter().fold(rhs.abs(), |a, t| a.max(t.abs()));
    if scale == 0.0 {
        0.0
    } else {
        (sum - rhs).abs() / scale
    }
}

/// `h̃` on `(0, ∞)` built from a [`DualSolution`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualFunction {
    solution: DualSolution,
    constants: DerivedConstants,
    problem: Problem,
    scaled: Scaled,
}

impl DualFunction {
    pub fn new(problem: &Problem) -> Result<Self> {
        let constants = problem.constants();
        let (solution, scaled) = solve_scaled(problem, &constants)?;
        Ok(DualFunction { solution, constants, problem: *problem, scaled })
    }

    /// Wraps arbitrary constants; used to study perturbed solutions.
    pub fn from_parts(problem: Problem, constants: DerivedConstants, solution: DualSolution) -> Result<Self> {
        let scaled = Scaled::from_solution(&solution, &constants)?;
        Ok(DualFunction { solution, constants, problem, scaled })
    }

    pub fn solution(&self) -> &DualSolution {
        &self.solution
    }

    pub fn constants(&self) -> &DerivedConstants {
        &self.constants
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    fn linear(&self) -> f64 {
        self.problem.consumption().floor_rate() / self.problem.market().r
    }

    /// Slope of the inner linear term: `c̄/(ρ − r)` (ρ ≠ r).
    fn inner_shift(&self) -> f64 {
        let c = self.problem.consumption();
        c.c_bar / (self.problem.market().rho - self.problem.market().r)
    }

    /// `c̄/(δ + λ)` (ρ = r).
    fn inner_log_coef(&self) -> f64 {
        self.problem.consumption().c_bar / (self.constants.delta + self.problem.market().lambda)
    }

    /// `c y_κ^j (y/y_κ)^e` given `ln(y/y_κ)`.
    fn term(&self, coef: f64, e: f64, ln_t: f64, j: f64) -> Result<f64> {
        math::scaled_power(coef, 1.0, e * ln_t + j * self.scaled.ln_yk, "dual power term")
    }

    /// As [`term`](Self::term) but saturating to `±∞`; curvature blows up
    /// as `y → 0` where value and slope stay finite.
    fn term_saturating(&self, coef: f64, e: f64, ln_t: f64, j: f64) -> f64 {
        self.term(coef, e, ln_t, j).unwrap_or(coef.signum() * f64::INFINITY)
    }

    /// `h̃` on the branch that serves wealth below the kink (`y > y_κ`).
    pub fn outer(&self, y: f64) -> Result<DualValue> {
        let k = &self.constants;
        let ln_t = self.scaled.ln_t(y, self.solution.y_kappa);
        let a = self.linear();
        let mut v = DualValue { value: a * y, slope: a, curvature: 0.0 };
        for (alpha, b) in self.scaled.outer.into_iter().zip([k.b1, k.b2]) {
            v.value += self.term(alpha, b, ln_t, 1.0)?;
            v.slope += self.term(alpha * b, b - 1.0, ln_t, 0.0)?;
            v.curvature += self.term_saturating(alpha * b * (b - 1.0), b - 2.0, ln_t, -1.0);
        }
        Ok(v)
    }

    /// `h̃` on the branch that serves wealth above the kink (`y ≤ y_κ`).
    pub fn inner(&self, y: f64) -> Result<DualValue> {
        let s = &self.solution;
        let k = &self.constants;
        match k.regime {
            Regime::RhoEqual => {
                let e = self.inner_log_coef();
                let ln_y = math::ln(y);
                Ok(DualValue {
                    value: s.dhat1 * y - e * y * ln_y,
                    slope: s.dhat1 - e * (ln_y + 1.0),
                    curvature: -e / y,
                })
            }
            _ => {
                let g = self.inner_shift();
                let (beta, b) = (self.scaled.inner, k.bhat1);
                let ln_t = self.scaled.ln_t(y, s.y_kappa);
                Ok(DualValue {
                    value: self.term(beta, b, ln_t, 1.0)? - g * y,
                    slope: self.term(beta * b, b - 1.0, ln_t, 0.0)? - g,
                    curvature: self.term_saturating(beta * b * (b - 1.0), b - 2.0, ln_t, -1.0),
                })
            }
        }
    }

    /// `(h̃, h̃', h̃'')` at `y > 0`.
    pub fn eval(&self, y: f64) -> Result<DualValue> {
        if !(y > 0.0) {
            return Err(Error::Domain { what: "dual variable y", value: y });
        }
        if y <= self.solution.y_kappa {
            self.inner(y)
        } else {
            self.outer(y)
        }
    }

    pub fn boundary_residuals(&self) -> Result<BoundaryResiduals> {
        let s = &self.solution;
        let k = &self.constants;
        let kappa = self.problem.consumption().kappa;
        let a = self.linear();
        let [a1, a2] = self.scaled.outer;
        let (b1, b2) = (k.b1, k.b2);
        let ln_x = self.scaled.ln_t(s.y0, s.y_kappa);

        let slope_at_y0 =
            relative(&[self.term(a1 * b1, b1 - 1.0, ln_x, 0.0)?, self.term(a2 * b2, b2 - 1.0, ln_x, 0.0)?, a], 0.0);
        let value_at_y0 = relative(&[self.term(a1, b1, ln_x, 1.0)?, self.term(a2, b2, ln_x, 1.0)?, a * s.y0], 1.0);
        let yk = s.y_kappa;
        let outer_slope_at_kink = relative(&[a1 * b1, a2 * b2, a], kappa);
        let outer_value = [a1 * yk, a2 * yk, a * yk];
        let (inner_slope_terms, inner_value_terms) = match k.regime {
            Regime::RhoEqual => {
                let e = self.inner_log_coef();
                let ln_yk = self.scaled.ln_yk;
                ([s.dhat1, -e * (ln_yk + 1.0)], [s.dhat1 * yk, -e * yk * ln_yk])
            }
            _ => {
                let g = self.inner_shift();
                let beta = self.scaled.inner;
                ([beta * k.bhat1, -g], [beta * yk, -g * yk])
            }
        };
        let inner_slope_at_kink = relative(&inner_slope_terms, kappa);
        let continuity_at_kink = relative(
            &[inner_value_terms[0], inner_value_terms[1], -outer_value[0], -outer_value[1], -outer_value[2]],
            0.0,
        );
        Ok(BoundaryResiduals { slope_at_y0, value_at_y0, outer_slope_at_kink, inner_slope_at_kink, continuity_at_kink })
    }
}
