use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ruin::table;
use ruin_core::value::{value_general, ValueQuery};
use ruin_core::{PenaltyFunction, RuinSolution};
use serde_json::Value;
use tempfile::TempDir;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn ruin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruin")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> Vec<u8> {
    let out = ruin(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn case(name: &str) -> String {
    configs().join(format!("{name}.json")).to_str().unwrap().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn eval(config: &str, what: &str, grid: &str) -> (Vec<String>, table::Rows) {
    let bytes = ok(&["eval", "--config", config, "--what", what, "--grid", grid]);
    table::read(&bytes).unwrap()
}

#[test]
fn solve_reports_regime_and_exponent() {
    let v: Value = serde_json::from_slice(&ok(&["solve", "--config", &case("case_a")])).unwrap();
    assert_eq!(v["regime"], "RhoGreater");
    let d = v["constants"]["d"].as_f64().unwrap();
    assert!((d + 1.7583057392117916).abs() < 1e-12);
    for key in ["y0", "y_kappa", "D1", "D2", "Dhat1", "regime"] {
        assert!(v["dual"].get(key).is_some(), "{key}");
    }
    assert!(v["max_boundary_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["pi_star_above_kappa"]["form"], "affine");
}

#[test]
fn rho_equal_has_constant_strategy_above_kink() {
    let v: Value = serde_json::from_slice(&ok(&["solve", "--config", &case("case_b")])).unwrap();
    assert_eq!(v["regime"], "RhoEqual");
    assert_eq!(v["pi_star_above_kappa"]["form"], "constant");
    // (μ − r) c̄ / (σ² (δ + λ))
    let expected = 0.04 * 0.03 / (0.04 * 0.06);
    assert!((v["pi_star_above_kappa"]["value"].as_f64().unwrap() - expected).abs() < 1e-12);
    assert!(v["w_safe"].is_null());
}

#[test]
fn invalid_market_exits_with_the_invariant() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(case("case_a")).unwrap().replace("\"mu\": 0.06", "\"mu\": 0.02");
    let cfg = write(&dir, "bad.json", &text);
    let out = ruin(&["solve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu must exceed r"));
    let missing = ruin(&["solve", "--config", dir.path().join("nope.json").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn psi_starts_at_one() {
    let (header, rows) = eval(&case("case_a"), "psi", "0:3:301");
    assert_eq!(header, ["w", "psi"]);
    assert_eq!(rows.len(), 301);
    assert_eq!(rows[0], [Some(0.0), Some(1.0)]);
    assert!(rows.windows(2).all(|p| p[1][1] <= p[0][1]));
}

#[test]
fn pi_is_continuous_at_the_kink() {
    // one-sided limits at the kink node
    let (_, near) = eval(&case("case_a"), "pi", "0.9999999999:1.0000000001:3");
    assert_eq!(near[1][0], Some(1.0));
    let at_kink = near[1][1].unwrap();
    assert!((near[0][1].unwrap() - at_kink).abs() < 1e-8);
    assert!((near[2][1].unwrap() - at_kink).abs() < 1e-8);
}

#[test]
fn h_table_marks_the_safe_level() {
    let (header, rows) = eval(&case("case_c"), "h", "2:3:11");
    assert_eq!(header, ["w", "h", "h_prime", "h_double_prime", "psi", "pi_star"]);
    assert!(rows[..10].iter().all(|r| r.iter().all(Option::is_some)));
    assert_eq!(rows[10], [Some(3.0), None, None, None, None, None]);
    let text =
        String::from_utf8(ok(&["eval", "--config", &case("case_c"), "--what", "h", "--grid", "2:3:11"])).unwrap();
    assert!(text.lines().last().unwrap().ends_with("out_of_domain,out_of_domain"));
}

#[test]
fn vf_matches_the_value_function() {
    let (header, rows) = eval(&case("case_a"), "vf", "-1:3:9");
    assert_eq!(header, ["w", "m", "value"]);
    let cfg = ruin::ProblemConfig::load(Path::new(&case("case_a"))).unwrap();
    let sol = RuinSolution::new(&cfg.problem().unwrap()).unwrap();
    let f = PenaltyFunction::shortfall(0.0).unwrap();
    for r in rows {
        let w = r[0].unwrap();
        let v = value_general(&sol, ValueQuery::new(w, w).unwrap(), &f).unwrap();
        assert_eq!(r[2], Some(v));
    }
    let out = ruin(&["eval", "--config", &case("case_b"), "--what", "vf"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn utility_table_marks_domain_ends() {
    let (header, rows) = eval(&case("case_c"), "utility", "0.04:0.06:5");
    assert_eq!(header, ["c", "u", "u_prime", "R_A", "R_R"]);
    // domain (c̄ + ρκ, c̄ + ρ w^s) = (0.04, 0.06)
    assert_eq!(rows[0][1..], [None, None, None, None]);
    assert_eq!(rows[4][1..], [None, None, None, None]);
    assert!(rows[1..4].iter().all(|r| r.iter().all(Option::is_some)));
    let ra: Vec<f64> = rows[1..4].iter().map(|r| r[3].unwrap()).collect();
    assert!(ra[0] < ra[1] && ra[1] < ra[2]);
    let (_, rows) = eval(&case("case_a"), "utility", "0.06:0.2:5");
    assert_eq!(rows[0][1], None);
}

#[test]
fn bad_arguments_are_rejected() {
    assert!(!ruin(&["eval", "--config", &case("case_a"), "--what", "psi", "--grid", "0:3"]).status.success());
    assert!(!ruin(&["eval", "--config", &case("case_a"), "--what", "nope"]).status.success());
    assert!(!ruin(&["verify", "--config", &case("case_a"), "--mode", "nope"]).status.success());
}

#[test]
fn failing_check_exits_nonzero() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(case("case_a")).unwrap().replace(
        "\"ruin_level\": 0.0",
        "\"ruin_level\": 0.0, \"grids\": {\"fd\": {\"lo\": -2.0, \"hi\": 41.0, \"n\": 41}}",
    );
    let cfg = write(&dir, "coarse.json", &text);
    let out = ruin(&["verify", "--config", &cfg, "--mode", "fd"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL fd_sup_error"));
}

#[test]
fn verify_modes_pass_on_canonical_cases() {
    for name in ["case_a", "case_b", "case_c"] {
        for mode in ["residual", "correspondence"] {
            let v: Value = serde_json::from_slice(&ok(&["verify", "--config", &case(name), "--mode", mode])).unwrap();
            assert_eq!(v["pass"], true, "{name} {mode}");
        }
    }
    let v: Value = serde_json::from_slice(&ok(&["verify", "--config", &case("case_a"), "--mode", "residual"])).unwrap();
    assert!(v["checks"][0]["value"].as_f64().unwrap() < 1e-8);
}

#[test]
fn dump_config_round_trips() {
    let dir = TempDir::new().unwrap();
    for name in ["case_a", "case_b", "case_c"] {
        let dumped = ok(&["solve", "--config", &case(name), "--dump-config", "--seed", "5"]);
        let cfg = write(&dir, "dumped.json", std::str::from_utf8(&dumped).unwrap());
        assert_eq!(ok(&["solve", "--config", &cfg, "--dump-config"]), dumped);
        assert_eq!(ok(&["solve", "--config", &cfg]), ok(&["solve", "--config", &case(name)]));
        let v: Value = serde_json::from_slice(&dumped).unwrap();
        assert_eq!(v["sim"]["seed"], 5);
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(case("case_a")).unwrap().replace("200000", "3000").replace("0.004", "0.02");
    let cfg = write(&dir, "small.json", &text);
    let runs: Vec<Vec<Vec<u8>>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("h{i}.csv"));
            ok(&["eval", "--config", &cfg, "--what", "h", "--out", out.to_str().unwrap()]);
            vec![
                std::fs::read(out).unwrap(),
                ok(&["solve", "--config", &cfg]),
                ok(&["eval", "--config", &cfg, "--what", "utility"]),
                ok(&["verify", "--config", &cfg, "--mode", "mc", "--seed", "3"]),
            ]
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let other = ok(&["verify", "--config", &cfg, "--mode", "mc", "--seed", "4"]);
    assert_ne!(other, runs[0][3]);
}
