//! The command-line binary: outputs, exit codes and reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enriques-phi")).args(args).output().unwrap()
}

fn scratch(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("enriques-phi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn resultant_of_the_unit_diagonal_triple_is_one() {
    let p = scratch(
        "unit.json",
        r#"{"triple": [[[1,0,0],[0,0,0],[0,0,0]], [[0,0,0],[0,1,0],[0,0,0]], [[0,0,0],[0,0,0],[0,0,1]]]}"#,
    );
    let out = bin(&["resultant", "--triple", p.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1");
    let out = bin(&["resultant", "--triple", p.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["numerator"], "1");
    assert_eq!(v["denominator"], "1");
}

#[test]
fn level2_boundary_starts_with_256_q_squared() {
    let out = bin(&["phi", "boundary", "--level", "2", "--order", "20"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let first = &v["series"]["terms"][0];
    assert_eq!(first[0], 2);
    assert_eq!(first[1], "256");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["phi", "boundary", "--level", "3", "--order", "5"]).status.code(), Some(2));
    assert_eq!(bin(&["verify", "no-such-check"]).status.code(), Some(2));
}

#[test]
fn computation_errors_exit_with_three() {
    let p = scratch("bad.json", "[1, 2]");
    assert_eq!(bin(&["resultant", "--triple", p.to_str().unwrap()]).status.code(), Some(3));
    let deg = bin(&["kummer", "split", "--partition", "123/456", "--lambda1", "2", "--lambda2", "3"]);
    assert_eq!(deg.status.code(), Some(3));
}

#[test]
fn failing_check_exits_with_one() {
    let cfg = scratch("strict.toml", "[checks.eta-modularity]\ntolerance = 0.0\n");
    let out = bin(&["verify", "eta-modularity", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("FAIL"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = scratch("a.json", "");
    let b = scratch("b.json", "");
    for p in [&a, &b] {
        let out = bin(&["verify", "resultant-axioms", "--seed", "11", "--json", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let one = bin(&["kummer", "periods", "--tau1", "0,1.1", "--tau2", "0.9,1.3", "--samples", "200"]);
    let two = bin(&["kummer", "periods", "--tau1", "0,1.1", "--tau2", "0.9,1.3", "--samples", "200"]);
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn theta_tables_and_values() {
    let out = bin(&["theta", "g1", "--char", "3", "--tau", "0,1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // θ3(i) = π^{1/4}/Γ(3/4)
    assert!((v["value"]["re"].as_f64().unwrap() - 1.086_434_811_213_308).abs() < 1e-12);
    let out = bin(&["theta", "tables"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eps_delta"].as_array().unwrap().len(), 9);
}
