use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn kcs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcs")).args(args).output().expect("binary runs")
}

fn fixture(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

const CYCLE_WITH_CHORDS: &str =
    "# six-cycle plus two chords\n6 8 2\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n5 0 1\n0 3 5\n1 4 5\n";

#[test]
fn solves_and_reports_json() {
    let input = fixture("cycle.txt", CYCLE_WITH_CHORDS);
    let out = kcs(&["--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "pass");
    assert_eq!(doc["k"], 2);
    // The six-cycle is the unique cheapest 2-connected subgraph.
    assert_eq!(doc["report"]["cost"]["exact"], "6");
    assert_eq!(doc["report"]["solution"], serde_json::json!([0, 1, 2, 3, 4, 5]));
}

#[test]
fn json_flag_writes_a_file_and_certify_accepts_it() {
    let input = fixture("cycle_certify.txt", CYCLE_WITH_CHORDS);
    let report = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cycle_report.json");
    let out = kcs(&["--input", input.to_str().unwrap(), "--json", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(saved["mode"], "kcs");

    let out = kcs(&["--input", input.to_str().unwrap(), "--mode", "certify", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(stdout_json(&out)["certification"]["passed"], true);
}

#[test]
fn infeasible_instance_exits_three() {
    let input = fixture("path.txt", "4 3 2\n0 1 1\n1 2 1\n2 3 1\n");
    let out = kcs(&["--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["status"], "infeasible");
}

#[test]
fn parse_errors_exit_one_with_line_number() {
    let input = fixture("bad.txt", "3 2 1\n0 1 1\n0 9 1\n");
    let out = kcs(&["--input", input.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn unknown_flags_exit_one() {
    assert_eq!(kcs(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(kcs(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_mode_compares_with_optimum() {
    let out = kcs(&["--seed", "3", "--n", "6", "--k", "2", "--mode", "oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = stdout_json(&out);
    assert_eq!(doc["oracle"]["within_ratio_bound"], true);
    assert!(doc["oracle"]["optimum"]["exact"].is_string());
}

#[test]
fn classify_mode_reports_classes() {
    let out = kcs(&["--seed", "1", "--n", "5", "--k", "2", "--mode", "classify"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let class = &doc["classification"];
    assert_eq!(class["symmetric"]["holds"], true);
    assert_eq!(class["crossing_supermodular"]["holds"], true);
    assert_eq!(class["intersecting_supermodular"]["holds"], false);
}

#[test]
fn seeded_runs_are_reproducible() {
    let a = stdout_json(&kcs(&["--seed", "9", "--n", "7"]));
    let b = stdout_json(&kcs(&["--seed", "9", "--n", "7"]));
    assert_eq!(a["report"], b["report"]);
}
