//! End-to-end runs of the `semik` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn semik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semik"))
        .args(args)
        .env_remove("SEMIK_BUDGET")
        .output()
        .expect("spawn semik")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout).lines().map(|l| serde_json::from_str(l).expect("jsonl line")).collect()
}

fn strip_timing(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn tour_passes() {
    let o = semik(&["report", &fixture("tour.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn tensor_fixture_passes() {
    let o = semik(&["report", &fixture("tensor.json"), "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let recs = lines(&o);
    let chain_v = recs.iter().find(|r| r["subject"] == "Chain ⊗ V").unwrap();
    assert_eq!(chain_v["data"]["cardinality"], 9);
}

#[test]
fn starved_tensor_is_undecided() {
    let o = semik(&["tensor", &fixture("tensor.json"), "Chain", "V", "--budget", "2", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(lines(&o)[0]["verdict"], "undecided");
    let env = Command::new(env!("CARGO_BIN_EXE_semik"))
        .args(["tensor", &fixture("tensor.json"), "Z4", "Z6"])
        .env("SEMIK_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn every_mutation_fails_with_witness() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/mutations");
    let mut n = 0;
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        let o = semik(&["report", p.to_str().unwrap(), "--format", "jsonl"]);
        assert_eq!(o.status.code(), Some(1), "{}", p.display());
        let recs = lines(&o);
        let witnessed = recs[0]["checks"]
            .as_array()
            .unwrap()
            .iter()
            .any(|c| c["passed"] == false && c["witness"].as_str().map_or(false, |w| !w.is_empty()));
        assert!(witnessed, "{}: no witness", p.display());
        n += 1;
    }
    assert!(n >= 20);
}

#[test]
fn reports_are_stable() {
    for args in [vec!["report", "tour.json"], vec!["report", "tensor.json"]] {
        let file = fixture(args[1]);
        let a = semik(&[args[0], &file, "--format", "jsonl"]);
        let b = semik(&[args[0], &file, "--format", "jsonl"]);
        assert_eq!(strip_timing(&a), strip_timing(&b));
        let a = semik(&[args[0], &file]);
        let b = semik(&[args[0], &file]);
        assert_eq!(strip_timing(&a), strip_timing(&b));
    }
}

fn write_tmp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("semik-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn short_table_row_is_positioned() {
    let f = write_tmp(
        "short.json",
        r#"{
  "declarations": [
    {"semiring": {"name": "S", "elements": ["0", "1"],
      "add": [["0", "1"], ["1"]],
      "mul": [["0", "0"], ["0", "1"]], "zero": "0", "one": "1"}}
  ],
  "commands": []
}
"#,
    );
    let o = semik(&["validate", &f]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":4:"), "{err}");
}

#[test]
fn dangling_reference_is_positioned() {
    let f = write_tmp(
        "dangling.json",
        r#"{
  "declarations": [
    {"module": {"name": "M", "base": "NOPE", "atoms": ["FREE"]}}
  ],
  "commands": []
}
"#,
    );
    let o = semik(&["validate", &f]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":3:") && err.contains("NOPE"), "{err}");
}

#[test]
fn malformed_json_exits_3() {
    let f = write_tmp("broken.json", "{\"declarations\": [\n  {\"semiring\": }\n]}\n");
    let o = semik(&["validate", &f]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
}
