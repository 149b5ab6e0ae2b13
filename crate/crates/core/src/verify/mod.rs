//! Independent oracles for the closed-form solution: Monte Carlo simulation
//! of the controlled wealth process, a finite-difference HJB solver and the
//! pointwise HJB residual.

pub mod fd;
pub mod mc;
pub mod residual;
pub mod tolerances;

pub use fd::{fd_solve, FdGrid, FdSolution};
pub use mc::{simulate_penalty, simulate_ruin, SimConfig, SimResult, Tally};
pub use residual::ode_residual;

/// One named comparison of a measured value against a bound.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: alloc::string::String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value ≤ bound`; NaN fails.
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Check { name: name.into(), value, bound, pass: value <= bound }
    }
}
