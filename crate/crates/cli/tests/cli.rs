//! End-to-end tests of the `srg` binary: output shapes, exit codes,
//! resource caps and determinism.

use std::process::{Command, Output};

fn srg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srg"))
        .args(args)
        .env_remove("SRG_VERTEX_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn spectrum_csv_shape() {
    let out = srg(&["--format", "csv", "spectrum", "--d", "3", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("d,n,eigenvalue,multiplicity,certified")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 5);
    let mult_sum: u32 = rows.iter().map(|r| r[3].parse::<u32>().unwrap()).sum();
    assert_eq!(mult_sum, 10);
    assert!(rows.iter().all(|r| r[4] == "true"));
}

#[test]
fn spectrum_json_schema() {
    let out = srg(&["--format", "json", "spectrum", "--d", "3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["schema"], "srg-report/1");
    assert_eq!(v["command"], "spectrum");
    assert_eq!(v["N"], 15);
    assert_eq!(v["certified"], true);
}

#[test]
fn trees_range_ok() {
    let out = srg(&["trees", "--n-range", "1..6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("n=1: formula=3 "));
    assert!(text.contains("n=2: formula=384 "));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn scan_emits_json_lines() {
    let out = srg(&["--format", "json", "scan", "--d", "3", "--n-range", "1..4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is json"))
        .collect();
    assert_eq!(lines.len(), 5); // 4 cells + verdict
    for cell in &lines[..4] {
        assert_eq!(cell["command"], "scan-cell");
        assert_eq!(cell["status"], "certified-integral");
    }
    assert_eq!(lines[4]["command"], "scan");
    assert_eq!(lines[4]["pass"], true);
}

#[test]
fn malformed_range_is_usage_error() {
    let out = srg(&["trees", "--n-range", "5..x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn vertex_cap_flag_is_enforced() {
    let out = srg(&["--vertex-cap", "100", "spectrum", "--d", "3", "--n", "999"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("resource limit"));
}

#[test]
fn vertex_cap_env_is_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_srg"))
        .args(["spectrum", "--d", "3", "--n", "9"])
        .env("SRG_VERTEX_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let a = srg(&["--format", "json", "spectrum", "--d", "3", "--n", "6"]);
    let b = srg(&["--format", "json", "spectrum", "--d", "3", "--n", "6"]);
    let c = srg(&["--jobs", "2", "--format", "json", "spectrum", "--d", "3", "--n", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn mahonian_sweep_ok() {
    let out = srg(&["mahonian", "--d", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("SR(3,1): M=2"));
    assert!(text.contains("SR(3,2): M=2"));
}
