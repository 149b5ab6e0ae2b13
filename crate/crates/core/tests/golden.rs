mod common;

use common::golden::{rho_equal as eq, rho_greater as gt, rho_less as lt};
use common::*;
use ruin_core::model::{derive_constants, exponent_closed_form};
use ruin_core::value::{value_general, PenaltyFunction, ValueQuery};
use ruin_core::{dual, HaraUtility, Regime, RuinSolution};

const TOL: f64 = 1e-12;

fn close(name: &str, got: f64, want: f64, tol: f64) {
    assert!(rel(got, want) < tol, "{name}: got {got:e}, want {want:e}, rel {:e}", rel(got, want));
}

#[test]
fn derived_constants() {
    let p = canonical(Regime::RhoGreater);
    let k = derive_constants(p.market(), p.consumption());
    close("delta", k.delta, gt::DELTA, TOL);
    close("b1", k.b1, gt::B1, TOL);
    close("b2", k.b2, gt::B2, TOL);
    close("bhat1", k.bhat1, gt::BHAT1, TOL);
    close("bhat2", k.bhat2, gt::BHAT2, TOL);
    close("d", k.d.unwrap(), gt::D, TOL);
    close("d closed form", exponent_closed_form(p.market()).unwrap(), gt::D, TOL);
    let k = canonical(Regime::RhoLess).constants();
    close("bhat1 C", k.bhat1, lt::BHAT1, TOL);
    close("d C", k.d.unwrap(), lt::D, TOL);
    assert!(canonical(Regime::RhoEqual).constants().d.is_none());
}

#[test]
fn dual_constants() {
    let cases = [
        (Regime::RhoGreater, [gt::RATIO, gt::Y0, gt::Y_KAPPA, gt::D1, gt::D2, gt::DHAT1]),
        (Regime::RhoEqual, [eq::RATIO, eq::Y0, eq::Y_KAPPA, eq::D1, eq::D2, eq::DHAT1]),
        (Regime::RhoLess, [lt::RATIO, lt::Y0, lt::Y_KAPPA, lt::D1, lt::D2, lt::DHAT1]),
    ];
    for (regime, want) in cases {
        let p = canonical(regime);
        let k = p.constants();
        let x = dual::solve_ratio(&p, &k).unwrap();
        let s = dual::solve_boundary_system(&p, &k).unwrap();
        let got = [x, s.y0, s.y_kappa, s.d1, s.d2, s.dhat1];
        for (name, (g, w)) in ["ratio", "y0", "y_kappa", "D1", "D2", "Dhat1"].iter().zip(got.iter().zip(want)) {
            close(&format!("{regime} {name}"), *g, w, 1e-11);
        }
    }
}

fn h_table(m: &[(f64, f64, f64, f64)], sol: &RuinSolution, regime: Regime) {
    for &(w, h, hp, hpp) in m {
        let v = sol.h_eval(w).unwrap();
        if h == 0.0 {
            assert_eq!((v.h, v.h_prime, v.h_double_prime), (0.0, 0.0, 0.0), "{regime} w={w}");
            continue;
        }
        close(&format!("{regime} h({w})"), v.h, h, 1e-11);
        close(&format!("{regime} h'({w})"), v.h_prime, hp, 1e-11);
        close(&format!("{regime} h''({w})"), v.h_double_prime, hpp, 1e-10);
    }
}

#[test]
fn ruin_function_values() {
    h_table(
        &[
            (-2.0, gt::H_AT_M2, gt::HP_AT_M2, gt::HPP_AT_M2),
            (-1.0, gt::H_AT_M1, gt::HP_AT_M1, gt::HPP_AT_M1),
            (0.5, gt::H_AT_0P5, gt::HP_AT_0P5, gt::HPP_AT_0P5),
            (2.0, gt::H_AT_2, gt::HP_AT_2, gt::HPP_AT_2),
            (2.9, gt::H_AT_2P9, gt::HP_AT_2P9, gt::HPP_AT_2P9),
            (5.0, gt::H_AT_5, gt::HP_AT_5, gt::HPP_AT_5),
        ],
        &canonical_solution(Regime::RhoGreater),
        Regime::RhoGreater,
    );
    h_table(
        &[
            (-2.0, eq::H_AT_M2, eq::HP_AT_M2, eq::HPP_AT_M2),
            (-1.0, eq::H_AT_M1, eq::HP_AT_M1, eq::HPP_AT_M1),
            (0.5, eq::H_AT_0P5, eq::HP_AT_0P5, eq::HPP_AT_0P5),
            (2.0, eq::H_AT_2, eq::HP_AT_2, eq::HPP_AT_2),
            (2.9, eq::H_AT_2P9, eq::HP_AT_2P9, eq::HPP_AT_2P9),
            (5.0, eq::H_AT_5, eq::HP_AT_5, eq::HPP_AT_5),
        ],
        &canonical_solution(Regime::RhoEqual),
        Regime::RhoEqual,
    );
    h_table(
        &[
            (-2.0, lt::H_AT_M2, lt::HP_AT_M2, lt::HPP_AT_M2),
            (-1.0, lt::H_AT_M1, lt::HP_AT_M1, lt::HPP_AT_M1),
            (0.5, lt::H_AT_0P5, lt::HP_AT_0P5, lt::HPP_AT_0P5),
            (2.0, lt::H_AT_2, lt::HP_AT_2, lt::HPP_AT_2),
            (2.9, lt::H_AT_2P9, lt::HP_AT_2P9, lt::HPP_AT_2P9),
            (5.0, lt::H_AT_5, lt::HP_AT_5, lt::HPP_AT_5),
        ],
        &canonical_solution(Regime::RhoLess),
        Regime::RhoLess,
    );
}

#[test]
fn canonical_ruin_probability() {
    let s = canonical_solution(Regime::RhoGreater);
    close("psi(2;0)", s.psi(2.0, 0.0).unwrap(), gt::H_AT_2, 1e-11);
}

#[test]
fn strategy_values() {
    for (regime, at_half, at_m1) in [
        (Regime::RhoGreater, gt::PI_AT_0P5, gt::PI_AT_M1),
        (Regime::RhoEqual, eq::PI_AT_0P5, eq::PI_AT_M1),
        (Regime::RhoLess, lt::PI_AT_0P5, lt::PI_AT_M1),
    ] {
        let s = canonical_solution(regime);
        close("pi(0.5)", s.pi_star(0.5).unwrap(), at_half, 1e-10);
        close("pi(-1)", s.pi_star(-1.0).unwrap(), at_m1, 1e-10);
    }
}

#[test]
fn hara_value() {
    let u = HaraUtility::new(&canonical(Regime::RhoGreater));
    close("u(0.11)", u.u(0.11).unwrap(), gt::HARA_U_AT_0P11, 1e-12);
}

#[test]
fn shortfall_against_quadrature_oracle() {
    let s = canonical_solution(Regime::RhoGreater);
    let f = PenaltyFunction::shortfall(0.0).unwrap();
    let v = value_general(&s, ValueQuery::new(2.0, 2.0).unwrap(), &f).unwrap();
    assert!((v - gt::SHORTFALL_AT_2).abs() < 1e-7, "{v} vs {}", gt::SHORTFALL_AT_2);
}
