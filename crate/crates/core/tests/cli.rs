use std::path::PathBuf;
use std::process::Command;

use milnor_galois::cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use serde_json::Value;

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("milnor-galois").chain(args.iter().copied()));
    let json = out.report.as_deref().map(|r| serde_json::from_str(r).unwrap()).unwrap_or(Value::Null);
    (out.code, json)
}

#[test]
fn ideal_lemma_exhaustive_passes() {
    let (code, r) = report(&["ideal-lemma", "--p", "2", "--s", "3", "--i", "1", "--exhaustive"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["verified"], true);
    assert_eq!(r["command"], "ideal-lemma");
}

#[test]
fn ideal_lemma_fuzz_is_deterministic() {
    let args = ["ideal-lemma", "--p", "3", "--s", "2", "--i", "2", "--fuzz", "50", "--seed", "9"];
    let a = run(std::iter::once("milnor-galois").chain(args));
    let b = run(std::iter::once("milnor-galois").chain(args));
    assert_eq!(a.code, EXIT_PASS);
    assert_eq!(a.report, b.report);
}

#[test]
fn bad_parameters_are_usage_errors() {
    assert_eq!(report(&["ideal-lemma", "--p", "4", "--s", "2", "--i", "1", "--exhaustive"]).0, EXIT_USAGE);
    assert_eq!(report(&["as-instance", "--p", "2", "--s", "0", "--dF", "2"]).0, EXIT_USAGE);
    assert_eq!(report(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(report(&["symbols", "--p", "2", "--s", "1", "--m", "2", "--check", "nope"]).0, EXIT_USAGE);
}

#[test]
fn decompose_missing_file_is_usage_error() {
    let out = run(["milnor-galois", "decompose", "--module-file", "/nonexistent/module.json"]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.report.is_none());
}

#[test]
fn decompose_regular_and_bad_shape() {
    let good = tmp("regular.json");
    // R_2[Z/2] with σ swapping the basis
    std::fs::write(&good, r#"{"p": 2, "s": 2, "n": 1, "rank": 2, "action": [0, 1, 1, 0]}"#).unwrap();
    let (code, r) = report(&["decompose", "--module-file", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["details"]["report"]["ranks"], serde_json::json!([0, 1]));
    assert_eq!(r["details"]["tower_compatible"], true);

    let bad = tmp("jordan2.json");
    std::fs::write(&bad, r#"{"p": 3, "s": 1, "n": 1, "rank": 2, "action": [1, 1, 0, 1]}"#).unwrap();
    let (code, r) = report(&["decompose", "--module-file", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(r["verified"], false);

    let garbage = tmp("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    assert_eq!(report(&["decompose", "--module-file", garbage.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn as_instance_reports_ranks() {
    let (code, r) = report(&["as-instance", "--p", "2", "--s", "2", "--dF", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["details"]["ranks"], serde_json::json!([3, 2]));
    assert_eq!(r["details"]["cross_check_passed"], true);
}

#[test]
fn symbols_checks() {
    assert_eq!(report(&["symbols", "--p", "3", "--s", "2", "--m", "3", "--check", "diagram", "--trials", "20"]).0, EXIT_PASS);
    let (code, r) = report(&["symbols", "--p", "2", "--s", "1", "--m", "2", "--check", "membership", "--x", "t"]);
    assert_eq!(code, EXIT_PASS);
    assert!(r["details"].to_string().contains("member"));
}

#[test]
fn condition_star_fuzz() {
    let (code, r) = report(&["condition-star", "--p", "2", "--n", "2", "--ell", "5", "--trials", "30", "--seed", "1"]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(r["details"]["mismatches"], 30);
}

#[test]
fn output_file_matches_stdout_and_binary_exit_codes() {
    let path = tmp("as.json");
    let bin = env!("CARGO_BIN_EXE_milnor-galois");
    let args = ["as-instance", "--p", "3", "--s", "1", "--dF", "2"];
    let stdout = Command::new(bin).args(args).output().unwrap();
    assert_eq!(stdout.status.code(), Some(EXIT_PASS));
    let to_file = Command::new(bin).args(args).arg("--output").arg(&path).output().unwrap();
    assert_eq!(to_file.status.code(), Some(EXIT_PASS));
    assert!(to_file.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().trim_end(), String::from_utf8(stdout.stdout).unwrap().trim_end());

    let usage = Command::new(bin).args(["decompose", "--module-file", "/nonexistent"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
}
