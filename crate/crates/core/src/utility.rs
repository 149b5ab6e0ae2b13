//! The HARA utility whose Merton investor (with discount rate ρ and the same
//! hazard rate) invests exactly like the ruin minimiser above the kink, and a
//! numerical reconstruction of that utility from the strategy alone.
//!
//! With `H = c̄r/(ρ − r)`:
//!
//! | regime | `u(c)` | `R_A(c)` |
//! |---|---|---|
//! | ρ > r | `(c + H)^d / d` | `(1 − d)/(c + H)` |
//! | ρ = r | `−(c̄r/(δ + λ)) exp(−(δ + λ)c/(c̄r))` | `(δ + λ)/(c̄r)` |
//! | ρ < r | `−(c̄r/(r − ρ) − c)^d / d` | `(d − 1)/(c̄r/(r − ρ) − c)` |
//!
//! Utilities are only determined up to a positive affine map, so every
//! comparison fits two constants first.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::model::{Problem, Regime, SafeLevel};
use crate::quad::adaptive_simpson;
use crate::ruin::RuinSolution;

/// Tolerance of each quadrature panel relative to its magnitude.
pub const PANEL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskAversion {
    pub absolute: f64,
    pub relative: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaraUtility {
    regime: Regime,
    d: Option<f64>,
    c_bar: f64,
    r: f64,
    rho: f64,
    delta: f64,
    lambda: f64,
    lower: f64,
    upper: Option<f64>,
}

impl HaraUtility {
    pub fn new(problem: &Problem) -> Self {
        let k = problem.constants();
        let m = problem.market();
        let c = problem.consumption();
        let upper = match k.w_safe {
            SafeLevel::Finite(ws) => Some(c.c_bar + c.rho * ws),
            SafeLevel::Unbounded => None,
        };
        HaraUtility {
            regime: k.regime,
            d: k.d,
            c_bar: c.c_bar,
            r: m.r,
            rho: m.rho,
            delta: k.delta,
            lambda: m.lambda,
            lower: c.floor_rate(),
            upper,
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// Open interval of consumption rates `(c̄ + ρκ, c̄ + ρ w^s)`.
    pub fn domain(&self) -> (f64, Option<f64>) {
        (self.lower, self.upper)
    }

    pub fn contains(&self, c: f64) -> bool {
        c > self.lower && self.upper.map_or(c.is_finite(), |u| c < u)
    }

    fn check(&self, c: f64) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::Domain { what: "consumption outside the utility domain", value: c })
        }
    }

    /// `c + H` in regime ρ > r, `c̄r/(r − ρ) − c` in regime ρ < r.
    fn base(&self, c: f64) -> f64 {
        let h = self.c_bar * self.r / (self.rho - self.r);
        match self.regime {
            Regime::RhoLess => -h - c,
            _ => c + h,
        }
    }

    fn exp_rate(&self) -> f64 {
        (self.delta + self.lambda) / (self.c_bar * self.r)
    }

    /// `(u, u', u'')` at `c`.
    pub fn derivatives(&self, c: f64) -> Result<(f64, f64, f64)> {
        self.check(c)?;
        Ok(match self.regime {
            Regime::RhoEqual => {
                let a = self.exp_rate();
                let e = math::exp(-a * c);
                (-e / a, e, -a * e)
            }
            Regime::RhoGreater => {
                let d = self.d.unwrap_or(f64::NAN);
                let x = self.base(c);
                let p = math::powf(x, d - 2.0);
                (p * x * x / d, p * x, (d - 1.0) * p)
            }
            Regime::RhoLess => {
                let d = self.d.unwrap_or(f64::NAN);
                let x = self.base(c);
                let p = math::powf(x, d - 2.0);
                (-p * x * x / d, p * x, -(d - 1.0) * p)
            }
        })
    }

    pub fn u(&self, c: f64) -> Result<f64> {
        Ok(self.derivatives(c)?.0)
    }

    pub fn u_prime(&self, c: f64) -> Result<f64> {
        Ok(self.derivatives(c)?.1)
    }

    pub fn u_double_prime(&self, c: f64) -> Result<f64> {
        Ok(self.derivatives(c)?.2)
    }

    pub fn risk_aversion(&self, c: f64) -> Result<RiskAversion> {
        self.check(c)?;
        let absolute = match self.regime {
            Regime::RhoEqual => self.exp_rate(),
            Regime::RhoGreater => (1.0 - self.d.unwrap_or(f64::NAN)) / self.base(c),
            Regime::RhoLess => (self.d.unwrap_or(f64::NAN) - 1.0) / self.base(c),
        };
        Ok(RiskAversion { absolute, relative: c * absolute })
    }
}

/// `G(w) = ((μ − r)/σ²) ∫ dz/π(z)` from the first grid point and
/// `Φ(w) = −∫_w^{w_N} exp(−G(v)) dv` from the last, tabulated on an
/// increasing grid inside `(κ, w^s)`. Anchoring `Φ` at the top keeps its
/// relative accuracy where `exp(−G)` is smallest.
#[derive(Debug)]
struct MertonKernel<'a> {
    sol: &'a RuinSolution,
    ratio: f64,
    grid: Vec<f64>,
    g: Vec<f64>,
    phi: Vec<f64>,
}

impl<'a> MertonKernel<'a> {
    fn new(sol: &'a RuinSolution, grid: &[f64]) -> Result<Self> {
        let kappa = sol.kappa();
        if grid.len() < 3 {
            return Err(Error::InvalidParams("reconstruction grid needs at least three points"));
        }
        if grid.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::InvalidParams("reconstruction grid must be strictly increasing"));
        }
        let (first, last) = (grid[0], grid[grid.len() - 1]);
        if !(first > kappa) {
            return Err(Error::Domain { what: "reconstruction grid must lie above the kink", value: first });
        }
        if !sol.safe_level().is_below(last) {
            return Err(Error::Domain { what: "reconstruction grid must lie below the safe level", value: last });
        }
        let n = grid.len();
        let mut k = MertonKernel {
            sol,
            ratio: sol.problem().market().merton_ratio(),
            grid: grid.to_vec(),
            g: alloc::vec![0.0; n],
            phi: alloc::vec![0.0; n],
        };
        let mut panels = alloc::vec![0.0; n];
        for i in 1..n {
            k.g[i] = k.g[i - 1] + k.g_increment(grid[i - 1], grid[i])?;
            panels[i] = k.phi_increment(i - 1, grid[i])?;
        }
        for i in (0..n - 1).rev() {
            k.phi[i] = k.phi[i + 1] - panels[i + 1];
        }
        Ok(k)
    }

    fn inv_pi(&self, z: f64) -> Result<f64> {
        Ok(self.ratio / self.sol.pi_star(z)?)
    }

    fn g_increment(&self, a: f64, b: f64) -> Result<f64> {
        relative_simpson(|z| self.inv_pi(z), a, b)
    }

    /// `∫ exp(−G)` from grid point `i` to `w`.
    fn phi_increment(&self, i: usize, w: f64) -> Result<f64> {
        let (a, g_a) = (self.grid[i], self.g[i]);
        relative_simpson(|v| Ok(math::exp(-(g_a + self.g_increment(a, v)?))), a, w)
    }

    /// `(G, Φ)` at an arbitrary `w` inside the grid span.
    fn at(&self, w: f64) -> Result<(f64, f64)> {
        let i = match self.grid.iter().rposition(|&x| x <= w) {
            Some(i) if w <= self.grid[self.grid.len() - 1] => i,
            _ => return Err(Error::Domain { what: "point outside the reconstruction grid", value: w }),
        };
        let g = self.g[i] + self.g_increment(self.grid[i], w)?;
        Ok((g, self.phi[i] + self.phi_increment(i, w)?))
    }
}

/// Adaptive Simpson to [`PANEL_TOL`] relative to a three-point estimate of
/// the panel, for positive integrands.
fn relative_simpson<F>(mut f: F, a: f64, b: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let rough = (b - a) / 6.0 * (f(a)? + 4.0 * f(0.5 * (a + b))? + f(b)?);
    adaptive_simpson(f, a, b, PANEL_TOL * rough.abs())
}

/// Utility rebuilt from the strategy alone, compared with the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityReconstruction {
    pub grid: Vec<f64>,
    pub consumption: Vec<f64>,
    /// `∫ ρ exp(−G)` before calibration.
    pub raw: Vec<f64>,
    /// `intercept + slope · raw`.
    pub reconstructed: Vec<f64>,
    pub closed_form: Vec<f64>,
    pub intercept: f64,
    pub slope: f64,
    pub max_relative_deviation: f64,
}

/// Integrates `d/dw u(c(w)) = ρ (V^u)'(w0) exp(−G(w))` along `grid` and fits
/// the intercept and scale to the closed form at the first and last points.
/// `raw` vanishes at the last point, so the fit there is exact.
/// `w0` only sets where `G` vanishes, which the fit absorbs.
pub fn reconstruct_utility(
    sol: &RuinSolution,
    u: &HaraUtility,
    w0: f64,
    grid: &[f64],
) -> Result<UtilityReconstruction> {
    let kernel = MertonKernel::new(sol, grid)?;
    let (g0, _) = kernel.at(w0)?;
    let spec = sol.problem().consumption();
    let rho = spec.rho;
    let scale = math::exp(g0);
    let raw: Vec<f64> = kernel.phi.iter().map(|p| rho * scale * p).collect();
    let consumption: Vec<f64> = grid.iter().map(|&w| spec.rate(w)).collect();
    let closed_form = consumption.iter().map(|&c| u.u(c)).collect::<Result<Vec<_>>>()?;
    let n = grid.len() - 1;
    let slope = (closed_form[n] - closed_form[0]) / (raw[n] - raw[0]);
    let intercept = closed_form[n] - slope * raw[n];
    let reconstructed: Vec<f64> = raw.iter().map(|r| intercept + slope * r).collect();
    let max_relative_deviation =
        reconstructed.iter().zip(&closed_form).map(|(a, b)| ((a - b) / b).abs()).fold(0.0, f64::max);
    Ok(UtilityReconstruction {
        grid: grid.to_vec(),
        consumption,
        raw,
        reconstructed,
        closed_form,
        intercept,
        slope,
        max_relative_deviation,
    })
}

/// Numerical check of the link between the ruin function and the Merton
/// value function of `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceCheck {
    pub w0: f64,
    /// `h'(w0) / (V^u)'(w0)`; negative.
    pub k: f64,
    /// `max |(ρ + λ) k V^u − k u(c) − λ h|` over the grid.
    pub value_residual: f64,
    /// `max |u'(c(w)) − (V^u)'(w)| / u'(c(w))`.
    pub marginal_deviation: f64,
    /// `max |π^u/π* − 1|`, with `π^u` from the rebuilt `V^u` and from the
    /// closed-form risk aversion, whichever is worse.
    pub pi_deviation: f64,
    /// Difference quotient of `c` over the grid minus ρ, worst case.
    pub consumption_slope_error: f64,
    pub max_h: f64,
}

/// Rebuilds `V^u` from `π*` with `(V^u)'(w0) = u'(c(w0))` and `V^u(w0)` from
/// the Merton equation at `w0`, then checks the value identity, the
/// first-order condition for consumption and the strategy on `grid`.
pub fn verify_correspondence(
    sol: &RuinSolution,
    u: &HaraUtility,
    w0: f64,
    grid: &[f64],
) -> Result<CorrespondenceCheck> {
    let kernel = MertonKernel::new(sol, grid)?;
    let m = sol.problem().market();
    let spec = sol.problem().consumption();
    let (g0, phi0) = kernel.at(w0)?;

    let c0 = spec.rate(w0);
    let (u0, up0, _) = u.derivatives(c0)?;
    let pi0 = sol.pi_star(w0)?;
    let vp0 = up0;
    let vpp0 = -vp0 * kernel.ratio / pi0;
    let delta = m.delta();
    let v0 = (m.r * w0 * vp0 + u0 - c0 * vp0 - delta * vp0 * vp0 / vpp0) / (m.rho + m.lambda);
    let h0 = sol.h_eval(w0)?;
    let k = h0.h_prime / vp0;

    let mut check = CorrespondenceCheck {
        w0,
        k,
        value_residual: 0.0,
        marginal_deviation: 0.0,
        pi_deviation: 0.0,
        consumption_slope_error: 0.0,
        max_h: 0.0,
    };
    for (i, &w) in grid.iter().enumerate() {
        let decay = math::exp(-(kernel.g[i] - g0));
        let vp = vp0 * decay;
        let v = v0 + vp0 * math::exp(g0) * (kernel.phi[i] - phi0);
        let c = spec.rate(w);
        let (uc, upc, _) = u.derivatives(c)?;
        let h = sol.h_eval(w)?.h;
        let pi = sol.pi_star(w)?;

        let residual = ((m.rho + m.lambda) * k * v - k * uc - m.lambda * h).abs();
        check.value_residual = check.value_residual.max(residual);
        check.marginal_deviation = check.marginal_deviation.max(((upc - vp) / upc).abs());

        let vpp = -vp * kernel.ratio / pi;
        let pi_from_v = -kernel.ratio * vp / vpp;
        let pi_from_hara = kernel.ratio / (spec.rho * u.risk_aversion(c)?.absolute);
        let dev = ((pi_from_v / pi) - 1.0).abs().max(((pi_from_hara / pi) - 1.0).abs());
        check.pi_deviation = check.pi_deviation.max(dev);
        check.max_h = check.max_h.max(h.abs());

        if i > 0 {
            let prev = grid[i - 1];
            let slope = (c - spec.rate(prev)) / (w - prev);
            check.consumption_slope_error = check.consumption_slope_error.max((slope - spec.rho).abs());
        }
    }
    Ok(check)
}
