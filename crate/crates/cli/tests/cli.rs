//! End-to-end drives of the `finring` binary: every subcommand, both output
//! formats, the documented exit codes, and report determinism.

use std::process::{Command, Output};

use serde_json::Value;

fn finring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> Value {
    let out = finring(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn analyze_text_summarizes_the_ring() {
    let out = finring(&["analyze", "zmod:12"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("ring zmod:12 (size 12)"));
    assert!(text.contains("units: {1,5,7,11}"));
    assert!(text.contains("nilradical: {0,6}"));
    assert!(text.contains("ideals (6):"));
    assert!(out.stderr.is_empty());
}

#[test]
fn analyze_json_pins_the_purity_pattern() {
    let v = stdout_json(&["analyze", "zmod:12", "--format", "json"]);
    assert_eq!(v["spec"], "zmod:12");
    assert_eq!(v["size"], 12);
    let pure: Vec<bool> = v["ideals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| row["pure"].as_bool().unwrap())
        .collect();
    // Lattice order (0), (6), (4), (3), (2), R.
    assert_eq!(pure, [true, false, true, true, false, true]);
    assert!(v["ideals"]
        .as_array()
        .unwrap()
        .iter()
        .all(|row| row["nPure"].as_bool().unwrap()));
    assert_eq!(v["classes"]["zeroDimensional"], true);
    assert_eq!(v["classes"]["field"], false);
}

#[test]
fn analyze_json_specs_reparse_to_the_same_ring() {
    let v = stdout_json(&["analyze", "polyquot:p=2;f=0,0,1", "--format", "json"]);
    let spec = v["spec"].as_str().unwrap();
    let caps = finring::caps::Caps::default();
    let ring = finring::ring::FiniteRing::parse_and_build(spec, &caps).unwrap();
    assert_eq!(ring.size(), v["size"].as_u64().unwrap() as usize);
    // N(R) = {0, x}: the printed nilradical matches the recomputed one.
    let nil = finring::purity::nilradical(&ring);
    assert_eq!(v["nilradical"], nil.display_members());
}

#[test]
fn localize_reproduces_the_kernel_and_spectrum() {
    let v = stdout_json(&["localize", "zmod:12", "--ideal", "2", "--format", "json"]);
    assert_eq!(v["kernel"], "{0,4,8}");
    assert_eq!(v["quotientSize"], 4);
    assert_eq!(v["quotientPrimes"].as_array().unwrap().len(), 1);
    assert_eq!(v["criteria"]["nPure"], true);
    assert_eq!(v["criteria"]["pure"], false);
    assert_eq!(v["criteria"]["kernelEqualsIdeal"], false);
    assert_eq!(v["criteria"]["localizedIdealZero"], false);

    let v = stdout_json(&["localize", "zmod:12", "--ideal", "3", "--format", "json"]);
    assert_eq!(v["kernel"], "{0,3,6,9}");
    assert_eq!(v["criteria"]["kernelEqualsIdeal"], true);
    assert_eq!(v["criteria"]["localizedIdealZero"], true);

    let v = stdout_json(&["localize", "zmod:12", "--ideal", "0", "--format", "json"]);
    assert_eq!(v["kernel"], "{0}");
    assert_eq!(v["quotientSize"], 12);
    assert_eq!(v["multSet"], "{1}");
}

#[test]
fn endo_counts_match_the_frozen_oracles() {
    let v = stdout_json(&[
        "endo", "zmod:12", "--ideal", "3", "--power", "1", "--format", "json",
    ]);
    assert_eq!(v["summary"]["count"], 4);
    assert_eq!(v["summary"]["commutative"], true);
    let v = stdout_json(&["endo", "zmod:12", "--ideal", "4", "--format", "json"]);
    assert_eq!(v["summary"]["count"], 3);
    assert_eq!(v["summary"]["commutative"], true);
}

#[test]
fn zint_queries_answer_in_both_formats() {
    let v = stdout_json(&["zint", "spec-localized", "9", "--format", "json"]);
    assert_eq!(v["primes"], serde_json::json!([0, 3]));
    assert_eq!(v["quotientIsField"], false);
    let out = finring(&["zint", "spec-localized", "9"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("[0, 3]"));

    let v = stdout_json(&["zint", "purity", "12", "--format", "json"]);
    assert_eq!(v["pure"], false);
    assert_eq!(v["nPure"], false);

    let v = stdout_json(&["zint", "radical-kernel", "12", "--format", "json"]);
    assert_eq!(v["radical"], 6);
    assert_eq!(v["kernel"], 0);
    assert_eq!(v["criterionIv"], false);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 2: parse error.
    let out = finring(&["analyze", "zmod:notanumber"]);
    assert_eq!(exit_code(&out), 2);
    assert!(!out.stderr.is_empty(), "diagnostic goes to stderr");
    // 2: usage error (clap).
    assert_eq!(exit_code(&finring(&["frobnicate"])), 2);
    // 2: unknown check id.
    assert_eq!(
        exit_code(&finring(&[
            "verify",
            "--checks",
            "ThmIX",
            "--max-ring-size",
            "4"
        ])),
        2
    );
    // 3: ring size cap.
    assert_eq!(exit_code(&finring(&["analyze", "zmod:500"])), 3);
    // 3: endo carrier cap.
    let out = finring(&["endo", "zmod:32", "--ideal", "2", "--max-endo-carrier", "4"]);
    assert_eq!(exit_code(&out), 3);
    // 0: clean single-target runs and clean verify.
    assert_eq!(exit_code(&finring(&["analyze", "zmod:5"])), 0);
    assert_eq!(
        exit_code(&finring(&["verify", "--max-ring-size", "6", "--jobs", "1"])),
        0
    );
}

#[test]
fn out_flag_redirects_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = finring(&[
        "analyze",
        "zmod:6",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty(), "nothing on stdout with --out");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["spec"], "zmod:6");
}

#[test]
fn verify_emits_the_report_schema_and_is_deterministic() {
    let run = || {
        stdout_json(&[
            "verify",
            "--max-ring-size",
            "8",
            "--jobs",
            "2",
            "--format",
            "json",
        ])
    };
    let mut first = run();
    let mut second = run();
    let keys: Vec<&str> = first
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    assert_eq!(
        keys,
        ["checks", "config", "corpus", "failures", "perCheck", "totals"]
    );
    assert_eq!(first["totals"]["fail"], 0);
    finring::verdict::strip_timing(&mut first);
    finring::verdict::strip_timing(&mut second);
    assert_eq!(first, second, "two identical-config runs differ");
}

#[test]
fn verify_check_filter_restricts_the_run() {
    let v = stdout_json(&[
        "verify",
        "--max-ring-size",
        "6",
        "--checks",
        "ThmIII,ThmIV",
        "--format",
        "json",
        "--jobs",
        "1",
    ]);
    let ids: Vec<&str> = v["perCheck"]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.as_str())
        .collect();
    assert_eq!(ids, ["ThmIII", "ThmIV"]);
    assert_eq!(
        v["config"]["checks"],
        serde_json::json!(["ThmIII", "ThmIV"])
    );
}

#[test]
fn verify_text_renders_the_summary_table() {
    let out = finring(&["verify", "--max-ring-size", "6", "--jobs", "1"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("corpus:"));
    assert!(text.contains("T2.6"));
    assert!(text.contains("no failures"));
}
