use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasimean"))
        .args(args)
        .output()
        .unwrap()
}

fn csv(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

#[test]
fn solve_geometric_target() {
    let data = csv("value,weight\n1,0.5\n4,0.5\n");
    let out = run(&[
        "solve",
        "--family",
        "power",
        "--target",
        "2",
        "--data",
        data.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["t_star"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn keys_are_sorted() {
    let data = csv("value\n1\n4\n");
    let out = run(&[
        "eval",
        "--generator",
        "power:2",
        "--data",
        data.path().to_str().unwrap(),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys: Vec<&str> = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('"'))
        .map(|l| l.split('"').next().unwrap())
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(keys, ["command", "generator", "mean", "n"]);
}

#[test]
fn validation_errors_exit_2_with_code() {
    let data = csv("value,weight\n1,0.5\n4,0.5\n");
    let out = run(&[
        "solve",
        "--family",
        "power",
        "--target",
        "5",
        "--data",
        data.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "target_out_of_range");

    let bad = csv("value,weight\n1,0.5\n4,oops\n");
    let out = run(&[
        "eval",
        "--generator",
        "ln",
        "--data",
        bad.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["code"], "invalid_input");
    assert!(err["message"].as_str().unwrap().contains("row 3"));

    let skewed = csv("value,weight\n1,0.3\n4,0.3\n");
    let out = run(&[
        "eval",
        "--generator",
        "ln",
        "--data",
        skewed.path().to_str().unwrap(),
    ]);
    assert_eq!(stderr_json(&out)["code"], "weight_sum");
}

#[test]
fn unknown_family_lists_builtins() {
    let out = run(&["verify", "--family", "cosh"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["code"], "usage");
    assert!(err["message"].as_str().unwrap().contains("galpha-exp"));
}

#[test]
fn non_positive_tolerance_is_rejected() {
    let out = run(&["--atol", "0", "verify", "--family", "power"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn error_classes_map_to_exit_codes() {
    use quasimean::cli::exit_code;
    use quasimean::error::Error;
    let out = run(&["bound", "--f", "ln", "--k", "power:-1", "--interval", "0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "domain_mismatch");
    assert_eq!(exit_code(&Error::BracketExhausted { lo: 0.0, hi: 1.0 }), 3);
    assert_eq!(
        exit_code(&Error::QuadratureNonConvergence { partial: 1.0 }),
        3
    );
    assert_eq!(exit_code(&Error::ConstantSample), 2);
}

#[test]
fn curve_csv_has_header_and_rows() {
    let data = csv("value\n1\n2\n");
    let out = run(&[
        "--format",
        "csv",
        "curve",
        "--family",
        "exptx",
        "--points",
        "7",
        "--data",
        data.path().to_str().unwrap(),
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,mean,error");
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[4], "0.0,1.5,");
}

#[test]
fn seed_is_reported_and_respected() {
    let a = run(&[
        "bound",
        "--f",
        "power:2",
        "--k",
        "power:3",
        "--interval",
        "1,2",
        "--samples",
        "50",
        "--seed",
        "7",
    ]);
    let b = run(&[
        "bound",
        "--f",
        "power:2",
        "--k",
        "power:3",
        "--interval",
        "1,2",
        "--samples",
        "50",
        "--seed",
        "8",
    ]);
    let (va, vb): (Value, Value) = (
        serde_json::from_slice(&a.stdout).unwrap(),
        serde_json::from_slice(&b.stdout).unwrap(),
    );
    assert_eq!(va["seed"], 7);
    assert_eq!(va["bound"], vb["bound"]);
    assert_ne!(va["monte_carlo"]["max_gap"], vb["monte_carlo"]["max_gap"]);
}
