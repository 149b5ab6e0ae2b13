//! Pass/fail bounds shared by the acceptance suite and the `verify` command.

/// HJB residual, relative to `1 + λ max|h|`.
pub const HJB_RESIDUAL: f64 = 1e-8;
/// Boundary conditions of the dual problem, relative.
pub const BOUNDARY: f64 = 1e-9;
/// `h(w^s)`, `h'(w^s)` and `h(0) − 1`.
pub const SHAPE: f64 = 1e-8;
/// Slack for monotonicity and convexity on sampled grids.
pub const SHAPE_SLACK: f64 = 1e-9;
/// Spread of `ψ(w; b1)/ψ(w; b2)` in `w`, relative.
pub const B_INDEPENDENCE: f64 = 1e-9;
/// Staircase penalties through the general and the step formula.
pub const STEP_EXACTNESS: f64 = 1e-12;
/// Monte Carlo band: this many standard errors ...
pub const MC_STD_ERRORS: f64 = 3.0;
/// ... plus this multiple of `dt` for the Euler bias.
pub const MC_DT_BIAS: f64 = 2.0;
/// Finite-difference sup-norm error on the reporting window.
pub const FD_SUP_ERROR: f64 = 1e-3;
/// Error ratio under grid doubling.
pub const FD_REFINEMENT_RATIO: f64 = 0.6;
/// Rebuilt against closed-form utility, relative.
pub const UTILITY_RECONSTRUCTION: f64 = 1e-6;
/// Value identity residual, relative to `λ max|h|`.
pub const CORRESPONDENCE: f64 = 1e-6;
/// Merton strategy against the ruin strategy, relative.
pub const PI_AGREEMENT: f64 = 1e-5;

/// Monte Carlo acceptance band around the analytic value.
pub fn mc_band(std_error: f64, dt: f64) -> f64 {
    MC_STD_ERRORS * std_error + MC_DT_BIAS * dt
}
