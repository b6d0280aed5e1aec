use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dlproof_core::proof::validate_proof_json;
use serde_json::Value;

fn dlproof(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_dlproof")).args(args).env("RUST_LOG", "warn").output().unwrap();
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CHAIN: &str = "# a chain\nSubClassOf(A B)\nSubClassOf(B C)\nSubClassOf(C D)\n";

#[test]
fn prove_writes_a_valid_proof() {
    let dir = tempfile::tempdir().unwrap();
    let o = write(dir.path(), "chain.ofn", CHAIN);
    let known = write(dir.path(), "sig.txt", "concept:A\nC\n");
    let out = dir.path().join("p.json");
    let out_s = out.to_str().unwrap();
    dlproof(&["prove", "--ontology", &o, "--goal", "SubClassOf(A D)", "--method", "elk-minimal", "--measure", "size", "--out", out_s]);
    let p: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    validate_proof_json(&p).unwrap();
    assert_eq!(p["measures"]["treeSize"], 5);

    dlproof(&["prove", "--ontology", &o, "--goal", "SubClassOf(A D)", "--method", "elk-minimal", "--known-signature", &known, "--out", out_s]);
    let p: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(p["measures"]["treeSize"], 3);

    dlproof(&["prove", "--ontology", &o, "--goal", "SubClassOf(A D)", "--method", "size", "--out", out_s]);
    let p: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    validate_proof_json(&p).unwrap();
    assert_eq!(p["method"], "size");
}

#[test]
fn prove_reports_non_entailment() {
    let dir = tempfile::tempdir().unwrap();
    let o = write(dir.path(), "chain.ofn", CHAIN);
    let out = Command::new(env!("CARGO_BIN_EXE_dlproof"))
        .args(["prove", "--ontology", &o, "--goal", "SubClassOf(D A)", "--out", "/dev/null"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not entailed"));
}

#[test]
fn classify_prints_subsumptions() {
    let dir = tempfile::tempdir().unwrap();
    let o = write(dir.path(), "chain.ofn", CHAIN);
    let text = String::from_utf8(dlproof(&["classify", "--ontology", &o]).stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("SubClassOf(A D)"));
}

#[test]
fn bench_runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let o = write(dir.path(), "chain.ofn", CHAIN);
    let sig = write(dir.path(), "sig.txt", "A\nB\nC\n");
    let run = |name: &str, extra: &[&str]| {
        let out = dir.path().join(name);
        let mut args = vec!["bench", "condense", "--ontology", &o, "--signature", &sig, "--min-symbols", "1"];
        args.extend_from_slice(&["--seed", "5", "--sample", "4", "--no-timing", "--out", out.to_str().unwrap()]);
        args.extend_from_slice(extra);
        dlproof(&args);
        fs::read_to_string(out).unwrap()
    };
    let a = run("a.csv", &[]);
    assert_eq!(a, run("b.csv", &["--sequential"]));
    assert!(a.starts_with("task_id,method,status,original_size,condensed_size,size_ratio,depth,weighted_size,coverage_pct,elapsed_ms\n"));
    assert_eq!(a.lines().count(), 5);

    let alch = write(
        dir.path(),
        "clash.ofn",
        "SubClassOf(C ObjectSomeValuesFrom(r D))\nSubClassOf(C ObjectAllValuesFrom(r ObjectComplementOf(D)))\nSubClassOf(owl:Nothing E)\nSubClassOf(E F)\n",
    );
    let out = dir.path().join("fbp.csv");
    let args = ["bench", "fbp", "--ontology", &alch, "--seed", "1", "--no-timing", "--non-elh-only", "--out", out.to_str().unwrap()];
    dlproof(&args);
    let csv = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert!(!rows.is_empty() && rows.len().is_multiple_of(3), "{csv}");
    assert!(rows.iter().all(|r| r.split(',').nth(2) == Some("ok")), "{csv}");
}
