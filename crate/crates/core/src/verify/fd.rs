//! Finite-difference policy iteration for
//! `λh = (rw − c(w))h' + min_π [(μ − r)πh' + ½σ²π²h'']`.
//!
//! Central differences where they give a monotone stencil, upwinding of the
//! drift elsewhere. The grid is shifted down so κ is a node; `h(w_lo)` is
//! pinned at 1 during the solve and the result rescaled so `h(0) = 1`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::{Problem, SafeLevel};

pub const FD_CHANGE_TOL: f64 = 1e-10;
pub const FD_MAX_ITERATIONS: u32 = 500;
/// Strategy cap as a multiple of `(w_hi − w_lo)(μ − r)/σ²`.
pub const POLICY_CAP_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FdGrid {
    pub w_lo: f64,
    pub w_hi: f64,
    pub n: usize,
    pub boundary_hi: f64,
}

impl FdGrid {
    /// Grid on `[w_lo, w^s]` when the safe level is finite, otherwise on
    /// `[w_lo, w_hi]` with `h(w_hi) = 0`.
    pub fn for_problem(problem: &Problem, w_lo: f64, w_hi: f64, n: usize) -> Self {
        let w_hi = match problem.constants().w_safe {
            SafeLevel::Finite(ws) => ws,
            SafeLevel::Unbounded => w_hi,
        };
        FdGrid { w_lo, w_hi, n, boundary_hi: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdSolution {
    pub nodes: Vec<f64>,
    pub h: Vec<f64>,
    pub policy: Vec<f64>,
    /// Nodes where the last policy update hit the cap.
    pub capped: Vec<bool>,
    pub cap: f64,
    pub iterations: u32,
}

impl FdSolution {
    pub fn spacing(&self) -> f64 {
        self.nodes[1] - self.nodes[0]
    }

    /// Linear interpolation of the node values.
    pub fn interpolate(&self, w: f64) -> Option<f64> {
        let (lo, hi) = (self.nodes[0], self.nodes[self.nodes.len() - 1]);
        if !(w >= lo && w <= hi) {
            return None;
        }
        let s = (w - lo) / self.spacing();
        let i = (s as usize).min(self.nodes.len() - 2);
        let t = s - i as f64;
        Some(self.h[i] + t * (self.h[i + 1] - self.h[i]))
    }

    pub fn cap_active_on(&self, lo: f64, hi: f64) -> bool {
        self.nodes.iter().zip(&self.capped).any(|(&w, &c)| c && w >= lo && w <= hi)
    }
}

/// Places κ on a node by stretching the spacing and moving `w_lo` down.
fn snapped_nodes(grid: &FdGrid, kappa: f64) -> Vec<f64> {
    let n = grid.n;
    let step = (grid.w_hi - grid.w_lo) / (n - 1) as f64;
    let nodes_above = if kappa < grid.w_hi { libm::floor((grid.w_hi - kappa) / step).max(1.0) } else { 0.0 };
    let step = if nodes_above > 0.0 { (grid.w_hi - kappa) / nodes_above } else { step };
    let lo = grid.w_hi - step * (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { grid.w_hi } else { lo + step * i as f64 }).collect()
}

pub fn fd_solve(problem: &Problem, grid: &FdGrid) -> Result<FdSolution> {
    if !(grid.w_lo < grid.w_hi) || grid.n < 3 {
        return Err(Error::InvalidParams("grid needs w_lo < w_hi and at least three nodes"));
    }
    if let SafeLevel::Finite(ws) = problem.constants().w_safe {
        if grid.w_hi > ws {
            return Err(Error::Domain { what: "grid extends past the safe level", value: grid.w_hi });
        }
    }
    let m = problem.market();
    let spec = problem.consumption();
    let nodes = snapped_nodes(grid, spec.kappa);
    if !(nodes[0] < 0.0 && grid.w_hi > 0.0) {
        return Err(Error::Domain { what: "grid must contain w = 0", value: nodes[0] });
    }
    let n = nodes.len();
    let dw = nodes[1] - nodes[0];
    let ratio = m.merton_ratio();
    let cap = POLICY_CAP_FACTOR * (grid.w_hi - nodes[0]) * ratio;
    let half_var = 0.5 * m.sigma * m.sigma;

    let mut policy: Vec<f64> = nodes.iter().map(|w| ratio * (1.0 + w.abs())).collect();
    let mut capped = alloc::vec![false; n];
    let mut h = alloc::vec![0.0; n];
    let (mut lower, mut diag, mut upper, mut rhs) =
        (alloc::vec![0.0; n], alloc::vec![0.0; n], alloc::vec![0.0; n], alloc::vec![0.0; n]);

    for iteration in 1..=FD_MAX_ITERATIONS {
        lower[0] = 0.0;
        diag[0] = 1.0;
        upper[0] = 0.0;
        rhs[0] = 1.0;
        lower[n - 1] = 0.0;
        diag[n - 1] = 1.0;
        upper[n - 1] = 0.0;
        rhs[n - 1] = grid.boundary_hi;
        for i in 1..n - 1 {
            let w = nodes[i];
            let pi = policy[i];
            let a = m.r * w + (m.mu - m.r) * pi - spec.rate(w);
            let s = half_var * pi * pi / (dw * dw);
            let (lo, up, mid) = if s >= a.abs() / (2.0 * dw) {
                (s - a / (2.0 * dw), s + a / (2.0 * dw), -2.0 * s)
            } else if a > 0.0 {
                (s, s + a / dw, -2.0 * s - a / dw)
            } else {
                (s - a / dw, s, -2.0 * s + a / dw)
            };
            lower[i] = lo;
            upper[i] = up;
            diag[i] = mid - m.lambda;
            rhs[i] = 0.0;
        }
        let next = thomas(&lower, &diag, &upper, &rhs);
        let change = next.iter().zip(&h).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        h = next;

        for i in 1..n - 1 {
            let hp = (h[i + 1] - h[i - 1]) / (2.0 * dw);
            let hpp = (h[i + 1] - 2.0 * h[i] + h[i - 1]) / (dw * dw);
            let raw = if hpp > 0.0 { -ratio * hp / hpp } else { -cap * hp.signum() };
            capped[i] = !(raw.abs() < cap);
            policy[i] = raw.clamp(-cap, cap);
        }
        if change < FD_CHANGE_TOL {
            let scale = 1.0 / interpolate_at_zero(&nodes, &h);
            h.iter_mut().for_each(|v| *v *= scale);
            return Ok(FdSolution { nodes, h, policy, capped, cap, iterations: iteration });
        }
    }
    Err(Error::NoConvergence { what: "finite-difference policy iteration", iterations: FD_MAX_ITERATIONS })
}

fn interpolate_at_zero(nodes: &[f64], h: &[f64]) -> f64 {
    let s = -nodes[0] / (nodes[1] - nodes[0]);
    let i = s as usize;
    let t = s - i as f64;
    h[i] + t * (h[i + 1] - h[i])
}

/// Solves a tridiagonal system; `lower[0]` and `upper[n−1]` are ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = alloc::vec![0.0; n];
    let mut d = alloc::vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / den;
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / den;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}
