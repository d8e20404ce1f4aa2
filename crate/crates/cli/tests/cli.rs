use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn job(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn run(args: &[&str], spec: &NamedTempFile) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subshift"))
        .args(args)
        .arg(spec.path())
        .output()
        .unwrap()
}

fn record(args: &[&str], spec: &NamedTempFile) -> Value {
    let out = run(args, spec);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const GOLDEN: &str = r#"{"system": {"kind": "full", "symbols": 2}, "words": ["11"]}"#;

#[test]
fn entropy_fixture() {
    let spec = job(GOLDEN);
    let out = run(&["entropy"], &spec);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.6180339887"), "{text}");
    let r = record(&["entropy", "--json"], &spec);
    assert_eq!(r["schema_version"], 1);
    assert!((r["result"]["lambda"].as_f64().unwrap() - 1.618_033_988_7).abs() < 1e-10);
    assert_eq!(r["result"]["oracle"]["lambda_agrees"], true);
}

#[test]
fn json_output_is_reproducible() {
    let spec = job(GOLDEN);
    let a = run(&["series", "--json"], &spec).stdout;
    let b = run(&["series", "--json"], &spec).stdout;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn local_escape_rate_is_exact() {
    let spec = job(r#"{"system": {"kind": "full", "symbols": 2}, "points": ["(1)"]}"#);
    let r = record(&["escape", "local", "--json"], &spec);
    assert_eq!(r["result"]["rho"], "1/2");
}

#[test]
fn gap_series_prefix() {
    let spec = job(r#"{"system": {"kind": "sgap", "period": "1"}, "words": ["11"]}"#);
    let r = record(&["series", "--json", "--nmax", "5"], &spec);
    let series: Vec<&str> = r["series"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(series[..6], ["1", "2", "3", "5", "8", "13"]);
    assert_eq!(r["normalization_shift"], 0);
    assert_eq!(r["series_matches"], true);
}

#[test]
fn exit_codes() {
    let bad = job("{\"system\": ");
    assert_eq!(run(&["entropy"], &bad).status.code(), Some(1));
    let bad_symbol = job(r#"{"system": {"kind": "full", "symbols": 2}, "words": ["12"]}"#);
    assert_eq!(run(&["entropy"], &bad_symbol).status.code(), Some(1));
    let not_full = job(r#"{"system": {"kind": "dgap", "d": 2}, "words": ["11"]}"#);
    assert_eq!(run(&["escape", "rate"], &not_full).status.code(), Some(2));
    // The gap-shift series counts boundary words that do not extend in X_w.
    let boundary = job(r#"{"system": {"kind": "sgap", "period": "10"}, "words": ["011"]}"#);
    let out = run(&["series"], &boundary);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("oracle disagreement"));
    assert_eq!(run(&["entropy"], &boundary).status.code(), Some(0));
}

#[test]
fn other_commands_run() {
    let swap = job(r#"{"system": {"kind": "full", "symbols": 3}, "u": "120", "w": "110"}"#);
    let r = record(&["conjugacy", "--json", "--nmax", "6"], &swap);
    assert_eq!(r["report"]["bijective"], true);

    let decay = job(r#"{"system": {"kind": "dgap", "d": 2}, "family": {"kind": "power", "symbol": 1}, "n_range": [4, 8]}"#);
    assert_eq!(record(&["decay", "--json"], &decay)["rows"].as_array().unwrap().len(), 5);

    let structure = job(r#"{"system": {"kind": "full", "symbols": 2}, "words": ["10"], "candidate": "11"}"#);
    let r = record(&["structure", "--json", "--horizon", "9"], &structure);
    assert_eq!(r["report"]["irreducible"]["verified"], false);
    assert_eq!(r["report"]["certificate"]["in_language"], true);

    let present = job(r#"{"system": {"kind": "dgap", "d": 2}, "words": ["11"]}"#);
    let r = record(&["present", "--json"], &present);
    assert!((r["lambda"].as_f64().unwrap() - 1.324_717_957_2).abs() < 1e-9);

    let seq = job(r#"{"system": {"kind": "full", "symbols": 2}, "points": ["(10)"], "n_range": [6, 10]}"#);
    let rows = record(&["escape", "sequence", "--json"], &seq)["rows"].as_array().unwrap().clone();
    assert!((rows.last().unwrap()["scaled_gap"].as_f64().unwrap() - 0.75).abs() < 0.05);
}
