#![allow(dead_code)]

pub mod golden;

use proptest::prelude::*;
use ruin_core::{ConsumptionSpec, MarketParams, Problem, Regime, RuinSolution};

pub const R: f64 = 0.02;
pub const MU: f64 = 0.06;
pub const SIGMA: f64 = 0.2;
pub const LAMBDA: f64 = 0.04;

/// Canonical parameters: ρ = 0.05, 0.02, 0.01 with c̄ = 0.01, 0.03, 0.03.
pub fn canonical(regime: Regime) -> Problem {
    let (rho, c_bar) = match regime {
        Regime::RhoGreater => (0.05, 0.01),
        Regime::RhoEqual => (0.02, 0.03),
        Regime::RhoLess => (0.01, 0.03),
    };
    Problem::new(
        MarketParams { r: R, mu: MU, sigma: SIGMA, lambda: LAMBDA, rho },
        ConsumptionSpec { c_bar, kappa: 1.0, rho },
    )
    .unwrap()
}

pub fn canonical_solution(regime: Regime) -> RuinSolution {
    RuinSolution::new(&canonical(regime)).unwrap()
}

pub const REGIMES: [Regime; 3] = [Regime::RhoGreater, Regime::RhoEqual, Regime::RhoLess];

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Valid problems of one regime over a broad but realistic box.
pub fn problems(regime: Regime) -> impl Strategy<Value = Problem> {
    (0.005..0.08f64, 0.01..0.15f64, 0.1..0.5f64, 0.01..0.2f64, 0.2..5.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(
        move |(r, premium, sigma, lambda, kappa, u1, u2)| {
            let rho = match regime {
                Regime::RhoGreater => r + 0.005 + 0.1 * u1,
                Regime::RhoEqual => r,
                Regime::RhoLess => r * (0.1 + 0.8 * u1),
            };
            let c_bar = match regime {
                Regime::RhoGreater => 0.9 * (r - rho) * kappa + u2 * 0.1,
                Regime::RhoEqual => 0.002 + 0.1 * u2,
                Regime::RhoLess => (r - rho) * kappa * (1.05 + 3.0 * u2),
            };
            Problem::new(MarketParams { r, mu: r + premium, sigma, lambda, rho }, ConsumptionSpec { c_bar, kappa, rho })
                .unwrap()
        },
    )
}

pub fn any_problem() -> impl Strategy<Value = Problem> {
    prop_oneof![problems(Regime::RhoGreater), problems(Regime::RhoEqual), problems(Regime::RhoLess)]
}
