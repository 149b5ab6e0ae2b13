//! Minimum probability of lifetime ruin, lifetime-minimum-wealth penalties
//! and the implied HARA utilities for an investor with piecewise-linear
//! consumption in a Black–Scholes market.
//!
//! The pipeline is:
//!
//! 1. [`model`]: validate market and consumption parameters and derive the
//!    characteristic exponents.
//! 2. [`dual`]: solve the boundary-value problem for the concave dual
//!    `h̃(y)` of the ruin function.
//! 3. [`ruin`]: recover `h(w)`, the ruin probability `ψ(w; b) = h(w)/h(b)`
//!    and the optimal risky investment `π*(w)`.
//! 4. [`value`]: value of an arbitrary nonincreasing penalty of lifetime
//!    minimum wealth.
//! 5. [`utility`]: the HARA utility whose Merton investor follows the same
//!    strategy, and a numerical check of that correspondence.
//! 6. [`verify`]: Monte Carlo and finite-difference oracles.
//!
//! ```
//! use ruin_core::{ConsumptionSpec, MarketParams, Problem, RuinSolution};
//!
//! let market = MarketParams { r: 0.02, mu: 0.06, sigma: 0.2, lambda: 0.04, rho: 0.05 };
//! let consumption = ConsumptionSpec { c_bar: 0.01, kappa: 1.0, rho: 0.05 };
//! let problem = Problem::new(market, consumption).unwrap();
//! let sol = RuinSolution::new(&problem).unwrap();
//! let psi = sol.psi(2.0, 0.0).unwrap();
//! assert!((psi - 0.10346347579020561).abs() < 1e-10);
//! ```
//!
//! The crate is `no_std` (with `alloc`) unless the `std` feature is on.
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(missing_debug_implementations)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;
pub mod quad;
pub mod roots;

pub mod dual;
pub mod model;
pub mod ruin;
pub mod utility;
pub mod value;
pub mod verify;

pub use dual::{DualFunction, DualSolution, DualValue};
pub use error::{Error, Result};
pub use model::{ConsumptionSpec, DerivedConstants, MarketParams, Problem, Regime, SafeLevel};
pub use ruin::{HValue, RuinSolution};
pub use utility::{CorrespondenceCheck, HaraUtility, RiskAversion, UtilityReconstruction};
pub use value::{Jump, PenaltyFunction, SmoothPenalty, ValueQuery};
