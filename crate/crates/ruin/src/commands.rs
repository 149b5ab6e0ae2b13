//! The `solve`, `eval` and `verify` pipelines. Each returns its output so
//! the binary only decides where the bytes go.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use ruin_core::dual::BoundaryResiduals;
use ruin_core::value::{value_general, ValueQuery};
use ruin_core::verify::{Check, SimConfig};
use ruin_core::{DerivedConstants, DualSolution, Error, HaraUtility, Problem, Regime, RuinSolution, SafeLevel};
use serde::Serialize;

use crate::checks::{self, Simulation};
use crate::config::{GridSpec, Grids, ProblemConfig, SimSection};
use crate::table::Table;

/// `π*` on `[κ, w^s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum StrategyAboveKink {
    Affine { slope: f64, intercept: f64 },
    Constant { value: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub regime: Regime,
    pub constants: DerivedConstants,
    pub dual: DualSolution,
    /// `null` when infinite.
    pub w_safe: Option<f64>,
    pub boundary_residuals: BoundaryResiduals,
    pub max_boundary_residual: f64,
    pub pi_star_at_kappa: f64,
    pub pi_star_above_kappa: StrategyAboveKink,
}

pub fn summary(sol: &RuinSolution) -> Result<Summary> {
    let p = sol.problem();
    let m = p.market();
    let c = p.consumption();
    let constants = *sol.dual().constants();
    let residuals = sol.dual().boundary_residuals()?;
    let ratio = m.merton_ratio();
    let above = match (sol.regime(), constants.d) {
        (Regime::RhoEqual, _) => StrategyAboveKink::Constant { value: sol.pi_star(c.kappa)? },
        (_, Some(d)) => {
            let slope = ratio / (1.0 - d);
            StrategyAboveKink::Affine { slope, intercept: slope * c.c_bar / (m.rho - m.r) }
        }
        (_, None) => bail!("exponent d missing outside the ρ = r regime"),
    };
    Ok(Summary {
        regime: sol.regime(),
        dual: *sol.dual().solution(),
        w_safe: match sol.safe_level() {
            SafeLevel::Finite(x) => Some(x),
            SafeLevel::Unbounded => None,
        },
        max_boundary_residual: residuals.max(),
        boundary_residuals: residuals,
        pi_star_at_kappa: sol.pi_star(c.kappa)?,
        pi_star_above_kappa: above,
        constants,
    })
}

pub fn solve(cfg: &ProblemConfig) -> Result<String> {
    let sol = RuinSolution::new(&cfg.problem()?)?;
    Ok(json(&summary(&sol)?))
}

/// The config with every default filled in.
pub fn resolved_config(cfg: &ProblemConfig, seed: Option<u64>) -> Result<ProblemConfig> {
    let problem = cfg.problem()?;
    let sim = cfg.sim(seed);
    Ok(ProblemConfig {
        sim: Some(SimSection {
            dt: Some(sim.dt),
            n_paths: Some(sim.n_paths),
            seed: Some(sim.seed),
            w_init: Some(sim.w_init),
            m_init: Some(sim.m_init),
            horizon_cap: Some(sim.horizon_cap),
        }),
        grids: Some(Grids { eval: Some(cfg.eval_grid(&problem)), fd: Some(cfg.fd_grid(&problem)) }),
        ruin_level: Some(cfg.ruin_level()),
        ..cfg.clone()
    })
}

pub fn dump_config(cfg: &ProblemConfig, seed: Option<u64>) -> Result<String> {
    let mut s = resolved_config(cfg, seed)?.to_json();
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    H,
    Psi,
    Pi,
    Vf,
    Utility,
}

impl FromStr for Curve {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "h" => Curve::H,
            "psi" => Curve::Psi,
            "pi" => Curve::Pi,
            "vf" => Curve::Vf,
            "utility" => Curve::Utility,
            _ => bail!("unknown curve {s:?}; expected h, psi, pi, vf or utility"),
        })
    }
}

/// A domain error becomes an empty cell; anything else is fatal.
fn cell(r: ruin_core::Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(x) => Ok(Some(x)),
        Err(Error::Domain { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Default consumption grid: the utility's domain, or a stretch above its
/// floor that covers the decay of `u'` when it is unbounded.
pub fn utility_grid(u: &HaraUtility) -> Result<GridSpec> {
    let (lo, hi) = u.domain();
    let hi = match hi {
        Some(hi) => hi,
        None => {
            let ra = u.risk_aversion(lo * (1.0 + 1e-12) + 1e-300)?.absolute;
            lo + (200.0 / ra).min(1.0)
        }
    };
    Ok(GridSpec { lo, hi, n: crate::config::DEFAULT_EVAL_NODES })
}

pub fn eval(cfg: &ProblemConfig, curve: Curve, grid: Option<GridSpec>) -> Result<Table> {
    let problem = cfg.problem()?;
    let sol = RuinSolution::new(&problem)?;
    if curve == Curve::Utility {
        let u = HaraUtility::new(&problem);
        let grid = match grid {
            Some(g) => g,
            None => utility_grid(&u)?,
        };
        let mut t = Table::new(vec!["c", "u", "u_prime", "R_A", "R_R"]);
        for c in grid.points() {
            let ra = u.risk_aversion(c);
            t.push(vec![
                Some(c),
                cell(u.u(c))?,
                cell(u.u_prime(c))?,
                cell(ra.clone().map(|r| r.absolute))?,
                cell(ra.map(|r| r.relative))?,
            ]);
        }
        return Ok(t);
    }
    let grid = grid.unwrap_or_else(|| cfg.eval_grid(&problem));
    let safe = sol.safe_level();
    let inside = |w: f64| safe.is_below(w);
    let b = cfg.ruin_level();
    let t = match curve {
        Curve::H => {
            let mut t = Table::new(vec!["w", "h", "h_prime", "h_double_prime", "psi", "pi_star"]);
            for w in grid.points() {
                if !inside(w) {
                    t.push(vec![Some(w), None, None, None, None, None]);
                    continue;
                }
                let v = sol.h_eval(w)?;
                let psi = cell(sol.psi(w, b))?;
                let pi = cell(sol.pi_star(w))?;
                t.push(vec![Some(w), Some(v.h), Some(v.h_prime), Some(v.h_double_prime), psi, pi]);
            }
            t
        }
        Curve::Psi => {
            let mut t = Table::new(vec!["w", "psi"]);
            for w in grid.points() {
                let psi = if inside(w) { cell(sol.psi(w, b))? } else { None };
                t.push(vec![Some(w), psi]);
            }
            t
        }
        Curve::Pi => {
            let mut t = Table::new(vec!["w", "pi_star"]);
            for w in grid.points() {
                t.push(vec![Some(w), cell(sol.pi_star(w))?]);
            }
            t
        }
        Curve::Vf => {
            let f = cfg.penalty()?.context("eval vf needs a penalty in the config")?;
            let mut t = Table::new(vec!["w", "m", "value"]);
            for w in grid.points() {
                let v = if inside(w) {
                    cell(ValueQuery::new(w, w).and_then(|q| value_general(&sol, q, &f)))?
                } else {
                    None
                };
                t.push(vec![Some(w), Some(w), v]);
            }
            t
        }
        Curve::Utility => unreachable!(),
    };
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Residual,
    Fd,
    Mc,
    Correspondence,
}

impl FromStr for Mode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "residual" => Mode::Residual,
            "fd" => Mode::Fd,
            "mc" => Mode::Mc,
            "correspondence" => Mode::Correspondence,
            _ => bail!("unknown mode {s:?}; expected residual, fd, mc or correspondence"),
        })
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Residual => "residual",
            Mode::Fd => "fd",
            Mode::Mc => "mc",
            Mode::Correspondence => "correspondence",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub mode: String,
    pub regime: Regime,
    pub pass: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sim_config: Option<SimConfig>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub simulations: Vec<Simulation>,
}

impl Report {
    pub fn to_json(&self) -> String {
        json(self)
    }

    /// One line per check, for people.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!("{} {}: {:.3e} (bound {:.3e})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value, c.bound)
            })
            .collect()
    }
}

pub fn verify(cfg: &ProblemConfig, mode: Mode, seed: Option<u64>) -> Result<Report> {
    let problem: Problem = cfg.problem()?;
    let sol = RuinSolution::new(&problem)?;
    let window = cfg.eval_grid(&problem);
    let mut sim_config = None;
    let mut simulations = Vec::new();
    let checks = match mode {
        Mode::Residual => checks::residual(&sol, &window)?,
        Mode::Fd => checks::fd(&problem, &sol, &cfg.fd_grid(&problem), &window)?,
        Mode::Mc => {
            let sim = cfg.sim(seed);
            let f = cfg.penalty()?;
            let (c, s) = checks::mc(&sim, &sol, cfg.ruin_level(), f.as_ref())?;
            sim_config = Some(sim);
            simulations = s;
            c
        }
        Mode::Correspondence => checks::correspondence(&sol)?,
    };
    Ok(Report {
        mode: mode.to_string(),
        regime: sol.regime(),
        pass: checks.iter().all(|c| c.pass),
        checks,
        sim_config,
        simulations,
    })
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
