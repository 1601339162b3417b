use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_critnum"))
        .args(args)
        .env("CRITNUM_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().next().expect("one line of output")).expect("valid JSON")
}

#[test]
fn exact_d3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&dir.path().join("c.jsonl"), &["cr", "exact", "--group", "D3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 4);
    assert_eq!(v["method"], "exhaustive");
}

#[test]
fn formula_d7() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&dir.path().join("c.jsonl"), &["cr", "formula", "--group", "D7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], 7);
    assert_eq!(v["theorem_tag"], "T1.3ii");
}

#[test]
fn verify_z27_is_cached_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let first = run(&cache, &["verify", "L2.6", "--group", "Z27"]);
    assert_eq!(first.status.code(), Some(0));
    let v = json(&first);
    assert_eq!(v["failures"], Value::Array(vec![]));
    assert_eq!(v["cases_checked"], 5_311_735);
    let lines_before = std::fs::read_to_string(&cache).unwrap().lines().count();
    let second = run(&cache, &["verify", "L2.6", "--group", "Z27"]);
    assert_eq!(second.stdout, first.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count(), lines_before);
}

#[test]
fn same_seed_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--no-cache", "cr", "sample", "--group", "D6", "--t", "5", "--trials", "200", "--seed", "9"];
    let a = run(&dir.path().join("a.jsonl"), &args);
    let b = run(&dir.path().join("b.jsonl"), &args);
    assert_eq!(a.status.code(), Some(0));
    // elapsed_ms may differ between fresh runs; everything else may not
    let strip = |o: &Output| {
        let mut v = json(o);
        v["elapsed_ms"] = Value::Null;
        v
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    for args in [
        &["cr", "exact", "--group", "Q99"][..],
        &["cr", "exact", "--group", "D3", "--frobnicate"],
        &["verify", "L9.9"],
        &["sigma", "--group", "Z5", "--set", "1,7"],
        &["verify", "L2.1"],
    ] {
        let out = run(&cache, args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invalid_table_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.cayley");
    std::fs::write(&file, "2\n0 1\n1 1\n").unwrap();
    let out = run(&dir.path().join("c.jsonl"), &["group", "load", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("identity/inverse"));
}

#[test]
fn table_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let file = dir.path().join("h.cayley");
    let made = run(&cache, &["group", "make", "heisenberg(3)", "--out", file.to_str().unwrap()]);
    assert_eq!(made.status.code(), Some(0));
    let loaded = run(&cache, &["group", "load", file.to_str().unwrap()]);
    assert_eq!(json(&made)["fingerprint"], json(&loaded)["fingerprint"]);
    let out = run(&cache, &["cr", "witness", "--group", file.to_str().unwrap()]);
    assert_eq!(json(&out)["lower_bound"], 10);
}

#[test]
fn sigma_and_pretty() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = run(&cache, &["sigma", "--group", "Z5", "--set", "1,2"]);
    assert_eq!(json(&out)["sigma"], serde_json::json!([1, 2, 3]));
    let out = run(&cache, &["--pretty", "cr", "exact", "--group", "D3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("value") && l.trim_end().ends_with('4')));
}

#[test]
fn catalog_lists_every_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&dir.path().join("c.jsonl"), &["catalog", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let names: Vec<String> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["name"].as_str().unwrap().to_string())
        .collect();
    for want in ["A4", "H27", "Z45", "D16", "Z9:Z3(k=4)"] {
        assert!(names.iter().any(|n| n == want), "{want} missing");
    }
}
