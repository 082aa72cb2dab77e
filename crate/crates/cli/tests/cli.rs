use std::process::{Command, Output};

use serde_json::Value;

fn checkers(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_checkers")).args(args).env_remove("CHECKERS_SEED").output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = checkers(&[&["--json"], args].concat());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn reduce_reports_counts() {
    let v = json(&["reduce", "--strategy", "head", "(\\b x. x @b x) @w (\\b y. y)", "--fuel", "100", "--trace"]);
    assert_eq!(v["normal"], true);
    assert_eq!(v["result"], "\\b y. y");
    assert_eq!(v["interactions"], 1);
    assert_eq!(v["trace"][0]["kind"], "interaction-head");
    assert_eq!(v["trace"][1]["kind"], "silent-head");
}

#[test]
fn compare_eta_reduction() {
    let v = json(&["compare", "--rel", "all", "\\y. x y", "x"]);
    for rel in ["bohm", "pwc", "ctx"] {
        assert_eq!(v[rel]["verdict"], "holds", "{rel}");
    }
    let v = json(&["compare", "--rel", "bohm-eta", "x", "\\y. x y"]);
    assert_eq!(v["bohm"]["verdict"], "fails");
    assert!(v.get("pwc").is_none());
}

#[test]
fn separate_identity_from_one() {
    let v = json(&["separate", "\\x.x", "\\x.\\y.x y"]);
    let (i, j) = (v["lhs_interactions"].as_u64().unwrap(), v["rhs_interactions"].as_u64().unwrap());
    assert!(j > i);
    let plugged = v["plugged_lhs"].as_str().unwrap();
    let r = json(&["reduce", plugged]);
    assert_eq!(r["interactions"].as_u64(), Some(i));
}

#[test]
fn exit_codes() {
    assert_eq!(checkers(&["reduce", "\\x."]).status.code(), Some(1));
    assert_eq!(checkers(&["separate", "x", "y"]).status.code(), Some(1));
    assert_eq!(checkers(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(checkers(&["compare", "--rel", "nope", "x", "x"]).status.code(), Some(2));
    assert_eq!(checkers(&["reduce", "--help"]).status.code(), Some(0));
}

#[test]
fn whiten_and_fmt() {
    let v = json(&["whiten", "--polarity", "+", "[] ->w X", "[] ->b X"]);
    assert_eq!(v["count"], 1);
    let v = json(&["whiten", "[] ->b X", "[] ->w X"]);
    assert_eq!(v["related"], false);
    let out = checkers(&["fmt", "--notation", "plain", "(\\w x. x) @b y"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "(\\x. x) y");
}

#[test]
fn corpus_report_is_reproducible() {
    let a = checkers(&["--json", "corpus", "--seed", "3"]);
    let b = checkers(&["--json", "corpus", "--seed", "3", "--workers", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "checkers-corpus-report/1");
    assert_eq!(v["summary"]["mismatches"], 0);
}

#[test]
fn corrupted_expectation_is_reported() {
    let src = include_str!("../../core/data/corpus.json");
    let mut corpus: Value = serde_json::from_str(src).unwrap();
    corpus["entries"] = Value::Array(corpus["entries"].as_array().unwrap()[..2].to_vec());
    corpus["entries"][0]["expected"]["ctx"] = "unknown".into();
    let path = std::env::temp_dir().join(format!("checkers-corrupt-{}.json", std::process::id()));
    std::fs::write(&path, corpus.to_string()).unwrap();
    let out = checkers(&["--json", "corpus", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let bad: Vec<_> =
        v["entries"].as_array().unwrap().iter().filter(|e| !e["mismatches"].as_array().unwrap().is_empty()).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["mismatches"][0], "ctx");
}
