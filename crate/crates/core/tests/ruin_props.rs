mod common;

use common::*;
use proptest::prelude::*;
use ruin_core::verify::ode_residual;
use ruin_core::{ConsumptionSpec, MarketParams, Problem, Regime, RuinSolution, SafeLevel};

/// Wealth window used for shape checks: `[-2, min(w^s, κ + 10))`, cut
/// where `h` leaves the normal floating-point range.
fn window(sol: &RuinSolution, n: usize) -> Vec<f64> {
    let top = match sol.safe_level() {
        SafeLevel::Finite(ws) => ws,
        SafeLevel::Unbounded => sol.kappa() + 10.0,
    };
    (0..n)
        .map(|i| -2.0 + (top + 2.0) * i as f64 / n as f64)
        .filter(|&w| {
            let h = sol.h_eval(w).unwrap();
            h.h > 1e-250 && h.h < 1e250 && h.h_double_prime > 1e-250
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn inversion_residual(p in any_problem(), u in 0.0..1.0f64) {
        let sol = RuinSolution::new(&p).unwrap();
        let w = -5.0 + u * (sol.kappa() + 5.0) * (1.0 - 1e-9);
        let y = sol.invert_dual(w).unwrap();
        prop_assert!(y > sol.dual().solution().y_kappa);
        let slope = sol.dual().outer(y).unwrap().slope;
        prop_assert!((slope - w).abs() <= 1e-12 * w.abs().max(1.0), "residual {:e}", slope - w);
    }

    #[test]
    fn legendre_round_trip(p in any_problem(), u in 0.0..1.0f64) {
        let sol = RuinSolution::new(&p).unwrap();
        let w = -3.0 + u * (sol.kappa() + 3.0) * (1.0 - 1e-9);
        let y = sol.invert_dual(w).unwrap();
        let dual = sol.dual().outer(y).unwrap().value;
        let h = sol.h_eval(w).unwrap();
        prop_assert!((dual - w * y - h.h).abs() <= 1e-10 * h.h.max(1.0));
        prop_assert_eq!(h.h_prime, -y);
        // h(w') ≥ h̃(y) − w'y for every w'
        for dw in [-0.5, -0.01, 0.01, 0.5] {
            let w2 = w + dw;
            let h2 = sol.h_eval(w2).unwrap().h;
            prop_assert!(h2 >= dual - w2 * y - 1e-10 * h2.max(1.0));
        }
    }

    #[test]
    fn shape_of_h(p in any_problem()) {
        let sol = RuinSolution::new(&p).unwrap();
        prop_assert!((sol.h_eval(0.0).unwrap().h - 1.0).abs() < 1e-12);
        let ws = window(&sol, 400);
        let vals: Vec<_> = ws.iter().map(|&w| sol.h_eval(w).unwrap()).collect();
        let scale = vals[0].h;
        for v in &vals {
            prop_assert!(v.h >= 0.0 && v.h_prime <= 0.0 && v.h_double_prime >= 0.0);
        }
        for t in vals.windows(2) {
            prop_assert!(t[1].h <= t[0].h);
        }
        for t in vals.windows(3) {
            prop_assert!(t[0].h - 2.0 * t[1].h + t[2].h >= -1e-9 * scale);
        }
    }

    #[test]
    fn c1_at_the_kink(p in any_problem()) {
        let sol = RuinSolution::new(&p).unwrap();
        let k = sol.kappa();
        let left = sol.h_eval(k - 1e-12 * k.max(1.0)).unwrap();
        let right = sol.h_eval(k).unwrap();
        prop_assert!(rel(left.h, right.h) < 1e-8);
        prop_assert!(rel(left.h_prime, right.h_prime) < 1e-8, "{} vs {}", left.h_prime, right.h_prime);
        let y_k = sol.dual().solution().y_kappa;
        prop_assert!(rel(-right.h_prime, y_k) < 1e-8);
    }

    #[test]
    fn strategy_matches_ratio_form(p in any_problem()) {
        let sol = RuinSolution::new(&p).unwrap();
        let ratio = p.market().merton_ratio();
        for w in window(&sol, 60).into_iter().skip(1) {
            let h = sol.h_eval(w).unwrap();
            if h.h == 0.0 {
                continue;
            }
            let via_h = -ratio * h.h_prime / h.h_double_prime;
            prop_assert!(rel(sol.pi_star(w).unwrap(), via_h) < 1e-8, "w = {w}");
        }
    }

    #[test]
    fn hjb_residual(p in any_problem()) {
        let sol = RuinSolution::new(&p).unwrap();
        let pts: Vec<f64> = window(&sol, 200).into_iter().filter(|w| *w != sol.kappa()).collect();
        let max_h = sol.h_eval(pts[0]).unwrap().h;
        let r = ode_residual(&sol, &pts).unwrap();
        prop_assert!(r < 1e-8 * (1.0 + p.market().lambda * max_h), "residual {r:e}");
    }

    #[test]
    fn ruin_ratio_free_of_level(p in any_problem(), b1 in -2.0..0.5f64, b2 in -2.0..0.5f64) {
        let sol = RuinSolution::new(&p).unwrap();
        prop_assume!(sol.safe_level().is_below(b1.max(b2) + 0.2));
        let lo = b1.max(b2);
        let pts: Vec<f64> = window(&sol, 50).into_iter().filter(|w| *w >= lo && sol.h_eval(*w).unwrap().h > 0.0).collect();
        let first = sol.psi(pts[0], b1).unwrap() / sol.psi(pts[0], b2).unwrap();
        for w in pts {
            let q = sol.psi(w, b1).unwrap() / sol.psi(w, b2).unwrap();
            prop_assert!(rel(q, first) < 1e-9);
        }
    }

    #[test]
    fn psi_is_a_probability(p in any_problem(), b in -2.0..0.5f64) {
        let sol = RuinSolution::new(&p).unwrap();
        prop_assume!(sol.safe_level().is_below(b));
        prop_assert_eq!(sol.psi(b, b).unwrap(), 1.0);
        let mut prev = 1.0;
        for w in window(&sol, 100).into_iter().filter(|w| *w >= b) {
            let v = sol.psi(w, b).unwrap();
            prop_assert!((0.0..=1.0).contains(&v) && v <= prev);
            prev = v;
        }
    }

    /// Raising ρ while holding the consumption floor `c̄ + ρκ` fixed lowers
    /// the amount invested below the kink.
    #[test]
    fn strategy_falls_with_rho(p in any_problem(), bump in 0.001..0.05f64, u in 0.0..1.0f64) {
        let c = *p.consumption();
        let m = *p.market();
        let rho2 = c.rho + bump;
        let spec2 = ConsumptionSpec { rho: rho2, c_bar: c.c_bar - bump * c.kappa, ..c };
        let p2 = Problem::new(MarketParams { rho: rho2, ..m }, spec2).unwrap();
        let (s1, s2) = (RuinSolution::new(&p).unwrap(), RuinSolution::new(&p2).unwrap());
        let w = -1.0 + u * (c.kappa + 1.0) * (1.0 - 1e-6);
        let (a, b) = (s1.pi_star(w).unwrap(), s2.pi_star(w).unwrap());
        prop_assert!(b < a * (1.0 + 1e-12), "{b} vs {a}");
    }
}

#[test]
fn myopia_on_canonical_case() {
    let sol = canonical_solution(Regime::RhoGreater);
    let below = linspace(-2.0, 1.0 - 1e-6, 300);
    let pis: Vec<f64> = below.iter().map(|&w| sol.pi_star(w).unwrap()).collect();
    assert!(pis.windows(2).all(|t| t[1] < t[0]), "not decreasing below the kink");
    let above = linspace(1.0, 11.0, 300);
    let pis: Vec<f64> = above.iter().map(|&w| sol.pi_star(w).unwrap()).collect();
    assert!(pis.windows(2).all(|t| t[1] > t[0]), "not increasing above the kink");

    let sol = canonical_solution(Regime::RhoLess);
    let above = linspace(1.0, 3.0 - 1e-6, 300);
    let pis: Vec<f64> = above.iter().map(|&w| sol.pi_star(w).unwrap()).collect();
    assert!(pis.windows(2).all(|t| t[1] < t[0]), "not decreasing toward the safe level");
}

#[test]
fn linear_strategy_above_kink() {
    let sol = canonical_solution(Regime::RhoGreater);
    for w in [1.0, 2.0, 7.5] {
        assert!((sol.pi_star(w).unwrap() / (w + 1.0 / 3.0) - 0.3625414).abs() < 1e-7);
    }
}

#[test]
fn safe_level_is_absorbing() {
    let sol = canonical_solution(Regime::RhoLess);
    let ws = sol.safe_level().as_f64();
    let at = sol.h_eval(ws).unwrap();
    assert_eq!((at.h, at.h_prime), (0.0, 0.0));
    let near = sol.h_eval(ws - 1e-3).unwrap();
    assert!(near.h < 1e-8 && near.h_prime.abs() < 1e-8);
    assert_eq!(sol.psi(ws, 0.0).unwrap(), 0.0);
    assert_eq!(ode_residual(&sol, &[ws, ws + 1.0]).unwrap(), 0.0);
}

#[test]
fn perturbed_coefficient_breaks_boundary_conditions() {
    let sol = canonical_solution(Regime::RhoGreater);
    let p = *sol.problem();
    let mut s = *sol.dual().solution();
    s.d1 *= 1.01;
    let bent = ruin_core::DualFunction::from_parts(p, p.constants(), s).unwrap();
    assert!(bent.boundary_residuals().unwrap().max() > 1e-4);
    let bent = RuinSolution::from_dual(bent).unwrap();
    assert!((bent.h_eval(0.0).unwrap().h - 1.0).abs() > 1e-4);
}
