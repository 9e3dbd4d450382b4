use std::path::Path;
use std::process::{Command, Output};

use harmspace_verify::export::{from_json, read_csv, to_json};

fn harmverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harmverify")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn list_names_every_suite() {
    let out = harmverify(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for s in harmspace_verify::suites() {
        assert!(text.contains(s.name), "{} missing", s.name);
    }
    assert_eq!(harmspace_verify::suites().len(), 16);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = harmverify(&["verify", "pairing", "--seed", "7", "--out", path(p)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    harmverify(&["verify", "pairing", "--seed", "8", "--out", path(&c)]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let out = harmverify(&["verify", "gamma-exact", "--out", path(&p)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&p).unwrap();
    let report = from_json(&text).unwrap();
    assert_eq!(report.suite, "gamma-exact");
    assert!(report.verdict && report.recomputed_verdict());
    assert_eq!(to_json(&report).unwrap(), text);
}

#[test]
fn csv_has_documented_columns() {
    let out = harmverify(&["verify", "gamma-exact", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("suite,case_id,value,expected,tol,verdict"));
    let rows = read_csv(&text).unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r.suite == "gamma-exact" && r.verdict == "pass"));
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let out = harmverify(&["verify", "no-such-suite"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
    assert_eq!(harmverify(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn out_of_range_config_names_the_constraint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("rro.json");
    std::fs::write(&cfg, r#"{"alpha": [0.5], "lambda": [1.2]}"#).unwrap();
    let out = harmverify(&["verify", "rro", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("lambda > alpha + 1"), "{err}");

    std::fs::write(&cfg, r#"{"alpha": [0.5], "lamda": [3]}"#).unwrap();
    let out = harmverify(&["verify", "rro", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failing_verdict_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("young.json");
    // the largest ratio is well above this
    std::fs::write(&cfg, r#"{"bound": 1e-3}"#).unwrap();
    let out = harmverify(&["verify", "young", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(1));
    let report = from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(!report.verdict);
    assert_eq!(report.failures().count(), 1);
}

#[test]
fn norm_of_a_constant() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("c.json");
    // 1 = c_0 Y_0 with Y_0 = 1 for the unit-mass sphere measure
    std::fs::write(&coeffs, r#"{"n": 2, "K": 0, "rows": [[1.0]]}"#).unwrap();
    let out = harmverify(&["norm", "--coeffs", path(&coeffs), "--space", r#"{"family":"H","p":2,"alpha":0.5}"#]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let v = doc["norm"]["value"].as_f64().unwrap();
    assert!((v - 1.0).abs() < 1e-12, "{v}");
}

#[test]
fn distance_of_zero_function() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("z.json");
    std::fs::write(&coeffs, r#"{"n": 2, "K": 0, "rows": [[0.0]]}"#).unwrap();
    let args = ["distance", "--coeffs", path(&coeffs), "--p", "2", "--alpha", "1.9", "--eps-grid", "0.5,0.25"];
    let out = harmverify(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(report.metadata["t2"], serde_json::json!(0.0));
    let bad = harmverify(&["distance", "--coeffs", path(&coeffs), "--p", "2", "--alpha", "1.9", "--eps-grid", "0.5,x"]);
    assert_eq!(bad.status.code(), Some(2));
}
