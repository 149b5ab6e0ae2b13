//! JSON problem description.

use std::path::Path;

use anyhow::{bail, Context, Result};
use ruin_core::value::{Jump, PenaltyFunction, SmoothPenalty};
use ruin_core::verify::SimConfig;
use ruin_core::{ConsumptionSpec, MarketParams, Problem, SafeLevel};
use serde::{Deserialize, Serialize};

/// Width of the default reporting window above κ when the safe level is
/// infinite.
pub const DEFAULT_WINDOW_ABOVE_KAPPA: f64 = 10.0;
pub const DEFAULT_WINDOW_LO: f64 = -2.0;
pub const DEFAULT_EVAL_NODES: usize = 1201;
/// The finite-difference domain reaches this far above κ so the artificial
/// `h(w_hi) = 0` sits well outside the reporting window.
pub const DEFAULT_FD_ABOVE_KAPPA: f64 = 40.0;
pub const DEFAULT_FD_NODES: usize = 16001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub market: MarketConfig,
    pub consumption: ConsumptionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub penalty: Option<PenaltyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grids: Option<Grids>,
    /// Ruin level `b` for `psi` and the Monte Carlo check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ruin_level: Option<f64>,
}

/// Market part; the consumption slope ρ lives with the consumption rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    pub r: f64,
    pub mu: f64,
    pub sigma: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyConfig {
    #[serde(default)]
    pub a0: f64,
    #[serde(default)]
    pub jumps: Vec<JumpConfig>,
    #[serde(default)]
    pub density: Option<Density>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpConfig {
    pub b: f64,
    pub a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Density {
    Shortfall { b: f64 },
    PowerShortfall { b: f64, exponent: f64 },
}

/// Every field falls back to [`SimConfig::default`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_paths: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_init: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_init: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_cap: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridSpec {
    /// Parses `LO:HI:N`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            bail!("grid must be LO:HI:N, got {s:?}");
        };
        let g = GridSpec {
            lo: lo.trim().parse().with_context(|| format!("grid lower end {lo:?}"))?,
            hi: hi.trim().parse().with_context(|| format!("grid upper end {hi:?}"))?,
            n: n.trim().parse().with_context(|| format!("grid size {n:?}"))?,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            bail!("grid needs finite lo < hi");
        }
        if self.n < 2 {
            bail!("grid needs at least 2 points");
        }
        Ok(())
    }

    /// Evenly spaced points with both ends exact.
    pub fn points(&self) -> Vec<f64> {
        let last = self.n - 1;
        (0..self.n)
            .map(|i| if i == last { self.hi } else { self.lo + (self.hi - self.lo) * (i as f64 / last as f64) })
            .collect()
    }
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn problem(&self) -> Result<Problem> {
        let m = self.market;
        let market = MarketParams { r: m.r, mu: m.mu, sigma: m.sigma, lambda: m.lambda, rho: self.consumption.rho };
        Ok(Problem::new(market, self.consumption)?)
    }

    pub fn penalty(&self) -> Result<Option<PenaltyFunction>> {
        let Some(p) = &self.penalty else {
            return Ok(None);
        };
        let mut jumps: Vec<Jump> = p.jumps.iter().map(|j| Jump { level: j.b, size: j.a }).collect();
        jumps.sort_by(|a, b| b.level.total_cmp(&a.level));
        let smooth = p.density.map(|d| match d {
            Density::Shortfall { b } => SmoothPenalty::Shortfall { level: b },
            Density::PowerShortfall { b, exponent } => SmoothPenalty::PowerShortfall { level: b, exponent },
        });
        Ok(Some(PenaltyFunction::new(p.a0, jumps, smooth)?))
    }

    pub fn sim(&self, seed: Option<u64>) -> SimConfig {
        let d = SimConfig::default();
        let s = self.sim.unwrap_or_default();
        SimConfig {
            dt: s.dt.unwrap_or(d.dt),
            n_paths: s.n_paths.unwrap_or(d.n_paths),
            seed: seed.or(s.seed).unwrap_or(d.seed),
            w_init: s.w_init.unwrap_or(d.w_init),
            m_init: s.m_init.or(s.w_init).unwrap_or(d.m_init),
            horizon_cap: s.horizon_cap.unwrap_or(d.horizon_cap),
        }
    }

    pub fn ruin_level(&self) -> f64 {
        self.ruin_level.unwrap_or(0.0)
    }

    /// `[−2, min(κ + 10, w^s)]` unless the config says otherwise.
    pub fn eval_grid(&self, problem: &Problem) -> GridSpec {
        if let Some(g) = self.grids.and_then(|g| g.eval) {
            return g;
        }
        let kappa = problem.consumption().kappa;
        let hi = match problem.constants().w_safe {
            SafeLevel::Finite(ws) => ws.min(kappa + DEFAULT_WINDOW_ABOVE_KAPPA),
            SafeLevel::Unbounded => kappa + DEFAULT_WINDOW_ABOVE_KAPPA,
        };
        GridSpec { lo: DEFAULT_WINDOW_LO, hi, n: DEFAULT_EVAL_NODES }
    }

    pub fn fd_grid(&self, problem: &Problem) -> GridSpec {
        if let Some(g) = self.grids.and_then(|g| g.fd) {
            return g;
        }
        let kappa = problem.consumption().kappa;
        GridSpec { lo: DEFAULT_WINDOW_LO, hi: kappa + DEFAULT_FD_ABOVE_KAPPA, n: DEFAULT_FD_NODES }
    }
}
