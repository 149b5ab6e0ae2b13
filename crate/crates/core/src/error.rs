use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter invariant failed; the message names it.
    #[error("{0}")]
    InvalidParams(&'static str),

    #[error("{what}: no sign change found after {doublings} bracket doublings")]
    NoBracket { what: &'static str, doublings: u32 },

    #[error("{what}: no convergence after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: u32 },

    #[error("{what}: log-magnitude {log_magnitude:.3e} outside the representable range")]
    Overflow { what: &'static str, log_magnitude: f64 },

    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("convexity violated at w = {w}: h'' = {h_double_prime}")]
    Convexity { w: f64, h_double_prime: f64 },

    #[error("penalty integral did not converge after {expansions} interval expansions")]
    Divergent { expansions: u32 },
}
