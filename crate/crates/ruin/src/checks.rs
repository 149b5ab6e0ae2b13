//! Oracle runs scored against the bounds in `ruin_core::verify::tolerances`.

use anyhow::Result;
use ruin_core::utility::{reconstruct_utility, verify_correspondence};
use ruin_core::value::{value_general, ValueQuery};
use ruin_core::verify::tolerances as tol;
use ruin_core::verify::{fd_solve, ode_residual, Check, FdGrid, FdSolution, SimConfig, SimResult};
use ruin_core::{HaraUtility, PenaltyFunction, Problem, Regime, RuinSolution};
use serde::Serialize;

use crate::config::GridSpec;
use crate::parallel;

/// Points at which the correspondence is checked above κ.
pub const CORRESPONDENCE_POINTS: usize = 100;
/// Upper end of the correspondence grid above κ when `w^s` is further away.
pub const CORRESPONDENCE_SPAN: f64 = 5.0;
pub const RISK_AVERSION_POINTS: usize = 1000;

/// `ode_residual / (1 + λ max|h|)` over `points`.
pub fn relative_hjb_residual(sol: &RuinSolution, points: &[f64]) -> Result<f64> {
    let lambda = sol.problem().market().lambda;
    let mut max_h: f64 = 0.0;
    for &w in points {
        max_h = max_h.max(sol.h_eval(w)?.h.abs());
    }
    Ok(ode_residual(sol, points)? / (1.0 + lambda * max_h))
}

pub fn residual(sol: &RuinSolution, window: &GridSpec) -> Result<Vec<Check>> {
    let pts = window.points();
    Ok(vec![
        Check::at_most("hjb_residual", relative_hjb_residual(sol, &pts)?, tol::HJB_RESIDUAL),
        Check::at_most("boundary_residual", sol.dual().boundary_residuals()?.max(), tol::BOUNDARY),
    ])
}

/// Largest `|h_fd − h|` over nodes in `[lo, hi]`.
pub fn fd_sup_error(sol: &RuinSolution, fd: &FdSolution, lo: f64, hi: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (&w, &h) in fd.nodes.iter().zip(&fd.h) {
        if w >= lo && w <= hi {
            worst = worst.max((h - sol.h_eval(w)?.h).abs());
        }
    }
    Ok(worst)
}

/// Finite differences on `grid` and on the grid with half the intervals,
/// both scored on `window`.
pub fn fd(problem: &Problem, sol: &RuinSolution, grid: &GridSpec, window: &GridSpec) -> Result<Vec<Check>> {
    let fine = fd_solve(problem, &FdGrid::for_problem(problem, grid.lo, grid.hi, grid.n))?;
    let coarse_n = (grid.n - 1) / 2 + 1;
    let coarse = fd_solve(problem, &FdGrid::for_problem(problem, grid.lo, grid.hi, coarse_n))?;
    let lo = window.lo.max(fine.nodes[0]);
    let hi = window.hi;
    let e_fine = fd_sup_error(sol, &fine, lo, hi)?;
    let e_coarse = fd_sup_error(sol, &coarse, lo, hi)?;
    let h0 = fine.interpolate(0.0).map_or(f64::INFINITY, |h| (h - 1.0).abs());
    Ok(vec![
        Check::at_most("fd_sup_error", e_fine, tol::FD_SUP_ERROR),
        Check::at_most("fd_refinement_ratio", e_fine / e_coarse, tol::FD_REFINEMENT_RATIO),
        Check::at_most("fd_policy_cap_active", fine.cap_active_on(lo, hi) as u8 as f64, 0.0),
        Check::at_most("fd_h_at_zero", h0, tol::SHAPE),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Simulation {
    pub name: String,
    pub analytic: f64,
    pub result: SimResult,
}

/// Ruin estimator against `ψ(w_init; b)`, and when a penalty is given the
/// penalty estimator against its value at `(w_init, m_init)`.
pub fn mc(
    cfg: &SimConfig,
    sol: &RuinSolution,
    b: f64,
    penalty: Option<&PenaltyFunction>,
) -> Result<(Vec<Check>, Vec<Simulation>)> {
    let mut checks = Vec::new();
    let mut sims = Vec::new();
    let ruin = parallel::simulate_ruin(cfg, sol, b)?;
    let psi = sol.psi(cfg.w_init, b)?;
    push_sim(&mut checks, &mut sims, "ruin", psi, ruin, cfg.dt);
    if let Some(f) = penalty {
        let q = ValueQuery::new(cfg.w_init, cfg.m_init)?;
        let v = value_general(sol, q, f)?;
        let pen = parallel::simulate_penalty(cfg, sol, f)?;
        push_sim(&mut checks, &mut sims, "penalty", v, pen, cfg.dt);
    }
    Ok((checks, sims))
}

fn push_sim(checks: &mut Vec<Check>, sims: &mut Vec<Simulation>, name: &str, analytic: f64, r: SimResult, dt: f64) {
    checks.push(Check::at_most(
        &format!("mc_{name}_deviation"),
        (r.estimate - analytic).abs(),
        tol::mc_band(r.std_error, dt),
    ));
    let share = r.n_capped as f64 / r.n_effective as f64;
    checks.push(Check::at_most(&format!("mc_{name}_capped_share"), share, ruin_core::verify::mc::MAX_CAPPED_SHARE));
    sims.push(Simulation { name: name.into(), analytic, result: r });
}

/// Wealth grid strictly inside `(κ, min(w^s, κ + 5))`.
pub fn correspondence_grid(sol: &RuinSolution, n: usize) -> Vec<f64> {
    let k = sol.kappa();
    let top = sol.safe_level().as_f64().min(k + CORRESPONDENCE_SPAN);
    let pad = 1e-3 * (top - k);
    GridSpec { lo: k + pad, hi: top - pad, n }.points()
}

pub fn correspondence(sol: &RuinSolution) -> Result<Vec<Check>> {
    let u = HaraUtility::new(sol.problem());
    let grid = correspondence_grid(sol, CORRESPONDENCE_POINTS);
    let w0 = grid[grid.len() * 2 / 5];
    let rec = reconstruct_utility(sol, &u, w0, &grid)?;
    let chk = verify_correspondence(sol, &u, w0, &grid)?;
    let lambda = sol.problem().market().lambda;
    Ok(vec![
        Check::at_most("utility_reconstruction", rec.max_relative_deviation, tol::UTILITY_RECONSTRUCTION),
        Check::at_most("value_identity_residual", chk.value_residual / (lambda * chk.max_h), tol::CORRESPONDENCE),
        Check::at_most("marginal_utility_deviation", chk.marginal_deviation, tol::CORRESPONDENCE),
        Check::at_most("pi_deviation", chk.pi_deviation, tol::PI_AGREEMENT),
        Check::at_most("risk_aversion_trend_violations", risk_aversion_violations(&u)? as f64, 0.0),
    ])
}

/// `n` points strictly inside the utility's domain; unbounded domains are
/// cut before `u'` underflows.
pub fn consumption_points(u: &HaraUtility, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = u.domain();
    let ra = u.risk_aversion(lo * (1.0 + 1e-12) + 1e-300)?.absolute;
    let hi = hi.unwrap_or(lo + (200.0 / ra).min(1.0));
    Ok((1..=n).map(|i| lo + (hi - lo) * i as f64 / (n + 1) as f64).collect())
}

/// Neighbouring points where `R_A` moves against the regime's trend:
/// decreasing for ρ > r, constant for ρ = r, increasing for ρ < r.
pub fn risk_aversion_violations(u: &HaraUtility) -> Result<usize> {
    let pts = consumption_points(u, RISK_AVERSION_POINTS)?;
    let ra = pts.iter().map(|&c| Ok(u.risk_aversion(c)?.absolute)).collect::<Result<Vec<_>>>()?;
    let bad = ra
        .windows(2)
        .filter(|p| match u.regime() {
            Regime::RhoGreater => !(p[1] < p[0]),
            Regime::RhoEqual => p[1] != p[0],
            Regime::RhoLess => !(p[1] > p[0]),
        })
        .count();
    Ok(bad)
}
