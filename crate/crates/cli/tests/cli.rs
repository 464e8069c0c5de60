//! End-to-end runs of the `relsub` binary: exit codes, golden report, subcommands.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn golden_file() -> PathBuf {
    root().join("problems/golden.toml")
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn relsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relsub")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn golden_file_matches_checked_in_report() {
    let out = relsub(&["run", golden_file().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let expected = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/golden.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn e2_fermat_exits_one_with_certificate() {
    let out = relsub(&["run", data("e2_fermat.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    let q = &r["queries"][0];
    assert_eq!(q["outcome"], "violated");
    assert_eq!(q["result"]["non_optimality_certificate"], true);
}

#[test]
fn malformed_guard_exits_three() {
    let out = relsub(&["run", data("bad_guard.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("functions.f"));
}

#[test]
fn inconclusive_exits_two() {
    let out = relsub(&["run", data("inconclusive.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["queries"][0]["outcome"], "inconclusive");
}

#[test]
fn missing_file_exits_three() {
    let out = relsub(&["run", data("does_not_exist.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn subdiff_subcommand_on_e2() {
    let out = relsub(&["subdiff", data("e2_fermat.toml").to_str().unwrap(), "--fn", "f", "--set", "Omega", "--point", "0", "--kind", "limiting"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["queries"][0]["outcome"], "{1}");
}

#[test]
fn meanvalue_subcommand_on_cube() {
    let out = relsub(&["meanvalue", golden_file().to_str().unwrap(), "--fn", "cube", "--a", "0", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let q = &json(&out)["queries"][0];
    assert_eq!(q["outcome"], "equality case");
    let c = q["result"]["c"][0].as_f64().unwrap();
    assert!((c - 1.0 / 3f64.sqrt()).abs() <= 1e-6, "{c}");
}

#[test]
fn optimality_and_sumrule_subcommands() {
    let file = golden_file();
    let file = file.to_str().unwrap();
    let out = relsub(&["optimality", file, "--fn", "e4_first", "--fn2", "neg_abs", "--set", "nonpos", "--point", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["queries"][0]["outcome"], "violated");
    let out = relsub(&["sumrule", file, "--fn", "e4_first", "--fn2", "neg_abs", "--set", "nonpos", "--point", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["queries"][0]["outcome"], "holds");
    let out = relsub(&["convexity", file, "--fn", "cube", "--a", "0", "--b", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["queries"][0]["outcome"], "in");
}

#[test]
fn unknown_name_in_subcommand_exits_three() {
    let out = relsub(&["subdiff", golden_file().to_str().unwrap(), "--fn", "nope", "--set", "unit", "--point", "0"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_compare_gaps_within_budget() {
    let out = relsub(&["oracle-compare", golden_file().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["max_gap"].as_f64().unwrap() <= 1e-3);
    assert!(r["rows"].as_array().unwrap().len() >= 12);
}

#[test]
fn same_seed_gives_identical_bytes_across_thread_counts() {
    let file = golden_file();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_relsub"))
            .args(["run", file.to_str().unwrap(), "--seed", "11"])
            .env("RELSUB_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, four) = (run("1"), run("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, run("1").stdout);
}

#[test]
fn out_and_csv_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let csv_dir = dir.path().join("csv");
    let out = relsub(&[
        "meanvalue",
        golden_file().to_str().unwrap(),
        "--fn",
        "cube",
        "--a",
        "0",
        "--b",
        "1",
        "--out",
        out_path.to_str().unwrap(),
        "--csv",
        csv_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["exit_code"], 0);
    let trace = std::fs::read_to_string(csv_dir.join("mean_value-cube.trace.csv")).unwrap();
    assert!(trace.starts_with("t,f,phi\n"));
}
