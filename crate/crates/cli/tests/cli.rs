use std::process::{Command, Output};

use serde_json::Value;

fn tmprod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmprod")).args(args).output().expect("run tmprod")
}

fn code(args: &[&str]) -> i32 {
    tmprod(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_slice(&tmprod(&full).stdout).expect("json report")
}

fn value(report: &Value, i: usize) -> f64 {
    report["results"][i]["value"].as_str().unwrap().parse().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["eval-f", "--b", "0.5", "--c", "1"]), 0);
    assert_eq!(code(&["eval-f", "--b", "-1", "--c", "0"]), 3);
    assert_eq!(code(&["eval-f", "--b", "0.5"]), 2);
    assert_eq!(code(&["eval-f", "--b", "0.5", "--c", "1", "--method", "magic"]), 2);
    assert_eq!(code(&["eval-f", "--b", "0.5", "--c", "1", "--eps", "0"]), 2);
    assert_eq!(code(&["eval-h", "--x", "-2"]), 3);
    assert_eq!(code(&["verify", "--name", "nonexistent"]), 2);
    assert_eq!(code(&["verify"]), 2);
    assert_eq!(code(&["plot-h", "--min", "-3"]), 3);
    assert_eq!(code(&["dirichlet", "--k", "0"]), 2);
    assert_eq!(code(&["dirichlet", "--k", "2", "--a", "1", "--variant", "plain"]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
}

#[test]
fn closed_form_values() {
    let r = json(&["eval-f", "--b", "0.5", "--c", "1"]);
    assert!((value(&r, 0) - std::f64::consts::SQRT_2).abs() < 1e-10);
    let r = json(&["eval-f", "--b", "0.25", "--c", "0.75"]);
    assert!((value(&r, 0) - 1.5).abs() < 1e-10);
    let r = json(&["eval-h", "--x", "0.5"]);
    assert!((value(&r, 0) - 1.5).abs() < 1e-10);
    let r = json(&["eval-h", "--x", "1"]);
    assert!((value(&r, 0) - std::f64::consts::SQRT_2).abs() < 1e-10);
}

#[test]
fn verify_all_reports_every_identity() {
    let r = json(&["verify", "--all"]);
    assert_eq!(r["pass"], Value::Bool(true));
    let passed = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|row| row["label"].as_str().unwrap().ends_with("[pass]"))
        .count();
    assert!(passed >= 7);
}

#[test]
fn report_schema_is_stable() {
    let r = json(&["h0", "--eps", "1e-2"]);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "elapsed_ms", "inputs", "pass", "results"]);
    for row in r["results"].as_array().unwrap() {
        let keys: Vec<&str> = row.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["abs_error", "certified", "label", "value"]);
        let v = row["value"].as_str().unwrap();
        let digits = v.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
        assert!(digits >= 17, "{v}");
    }
    assert_eq!(r["pass"], Value::Bool(true));
    assert_eq!(r["results"].as_array().unwrap().len(), 5);
}

#[test]
fn identical_runs_match_apart_from_timing() {
    let strip = |mut v: Value| {
        v["elapsed_ms"] = Value::Null;
        v
    };
    let args = ["dirichlet", "--k", "2", "--a", "0"];
    assert_eq!(strip(json(&args)), strip(json(&args)));
    let a = tmprod(&["plot-h", "--min", "0", "--max", "1", "--step", "0.1"]);
    let b = tmprod(&["plot-h", "--min", "0", "--max", "1", "--step", "0.1"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8(a.stdout).unwrap().starts_with("x,h\n0.0000000000000000,"));
}

#[test]
fn dirichlet_first_sum_is_log_derivative() {
    let r = json(&["dirichlet", "--k", "1", "--a", "1"]);
    let cfg = tmprod_core::EvalConfig::with_eps(1e-12);
    let d = tmprod_core::log_h_derivative(1.0, 1, &cfg).unwrap();
    assert!((value(&r, 0) - d.value).abs() < 1e-11);
}

#[test]
fn plot_defaults_have_551_rows() {
    let out = tmprod(&["plot-h"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 552);
}

#[test]
fn block_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tmprod"))
        .args(["eval-h", "--x", "1"])
        .env("TMPROD_MAX_BLOCKS", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let bad = Command::new(env!("CARGO_BIN_EXE_tmprod"))
        .args(["eval-h", "--x", "1"])
        .env("TMPROD_MAX_BLOCKS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
