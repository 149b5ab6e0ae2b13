//! File formats, the parallel Monte Carlo driver and the command pipelines
//! behind the `ruin` binary.
//!
//! A problem is one JSON document:
//!
//! ```json
//! {
//!   "market": {"r": 0.02, "mu": 0.06, "sigma": 0.2, "lambda": 0.04},
//!   "consumption": {"c_bar": 0.01, "kappa": 1.0, "rho": 0.05},
//!   "penalty": {"a0": 0, "jumps": [{"b": 0, "a": 1}], "density": {"kind": "shortfall", "b": 0.5}},
//!   "sim": {"n_paths": 200000, "dt": 0.004, "seed": 0},
//!   "grids": {"eval": {"lo": -2, "hi": 11, "n": 1201}},
//!   "ruin_level": 0
//! }
//! ```
//!
//! Everything after `consumption` is optional.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod commands;
pub mod config;
pub mod parallel;
pub mod table;

pub use commands::{Curve, Mode, Report, Summary};
pub use config::{GridSpec, ProblemConfig};
