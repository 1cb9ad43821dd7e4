use std::process::Command;

use cycloscope::cli;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cycloscope").chain(args.iter().copied());
    let code = cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn member_reports() {
    let v = json(&["member", "7", "--ell", "2", "--witness"]);
    assert_eq!(v["verdict"], "member");
    assert_eq!(v["reason"], "index_ge_ell");
    assert_eq!(v["witness"]["g"], "X^4 + X^3 + X^2 + 1");
    assert_eq!(v["witness"]["h"], "X^3 + X^2 + 1");
    let v = json(&["member", "11", "--ell", "5"]);
    assert_eq!(v["verdict"], "nonmember");
    assert!(v.get("witness").is_none());
}

#[test]
fn usage_errors_exit_2() {
    let (code, out, err) = run(&["member", "4", "--ell", "2"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("4 is not prime"), "{err}");
    for args in [
        &["frobnicate"][..],
        &["member", "7"],
        &["member", "7", "--ell", "2", "--bogus"],
        &["constants", "artin", "--precision", "1e-13"],
        &["constants", "hooley"],
        &["constants", "hooley", "--a", "4"],
        &["golomb-survey", "--a", "4", "--r", "1", "--limit", "1000"],
        &["davenport", "--ell", "6"],
        &["--oracle-cap", "0", "factor-phi", "7", "--ell", "2"],
    ] {
        assert_eq!(run(args).0, 2, "{args:?}");
    }
}

#[test]
fn capacity_errors_exit_3() {
    assert_eq!(run(&["factor-phi", "3001", "--ell", "2"]).0, 3);
    assert_eq!(run(&["--oracle-cap", "4000", "factor-phi", "3001", "--ell", "2"]).0, 0);
    assert_eq!(run(&["survey", "--ell", "2", "--limit", "1000000000"]).0, 3);
    assert_eq!(run(&["davenport", "--ell", "101"]).0, 3);
}

#[test]
fn factor_phi_lists_factors() {
    let v = json(&["factor-phi", "7", "--ell", "2"]);
    assert_eq!(v["factors"], serde_json::json!(["X^3 + X + 1", "X^3 + X^2 + 1"]));
    assert_eq!(v["r"], 3);
}

#[test]
fn constants_json_shape() {
    let v = json(&["constants", "artin", "--precision", "1e-6"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["label", "lo", "hi", "truncation", "tail_bound"] {
        assert!(keys.contains(&k), "{k}");
    }
    let lo: f64 = v["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v["hi"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 0.3739558136 && 0.3739558136 <= hi && hi - lo <= 1e-6);
    let g = json(&["constants", "golomb", "--a", "2", "--r", "2", "--precision", "1e-6"]);
    assert!(g["lo"].as_str().unwrap().starts_with("0.2804"));
    let b = json(&["constants", "bound", "--ell", "3", "--precision", "1e-6"]);
    assert!(b["lo"].as_str().unwrap().starts_with("0.2520"));
    let h = json(&["constants", "hooley", "--a", "-3", "--precision", "1e-6"]);
    assert!(h["lo"].as_str().unwrap().starts_with("0.4487"));
}

#[test]
fn survey_formats_and_out_file() {
    let (code, csv, _) = run(&["survey", "--ell", "3", "--limit", "20000", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut reader = csv::Reader::from_reader(csv.as_bytes());
    assert!(reader.headers().unwrap().len() >= 2);
    assert!(reader.records().count() > 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, err) =
        run(&["survey", "--ell", "3", "--limit", "20000", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(err.contains("survey finished"));
    let from_file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(from_file, json(&["survey", "--ell", "3", "--limit", "20000"]));
    assert_eq!(from_file["members"].as_u64().unwrap() + from_file["nonmembers"].as_u64().unwrap()
        + from_file["undecided"].as_u64().unwrap(), from_file["total_primes"].as_u64().unwrap());
}

#[test]
fn same_flags_same_bytes() {
    for args in [
        &["member", "11", "--ell", "3", "--witness"][..],
        &["constants", "golomb", "--a", "3", "--r", "4", "--precision", "1e-7"],
        &["survey", "--ell", "5", "--limit", "30000", "--deep-limit", "5000"],
        &["factor-phi", "1009", "--ell", "3"],
    ] {
        assert_eq!(run(args).1, run(args).1, "{args:?}");
    }
}

#[test]
fn davenport_and_lemma_checks() {
    let v = json(&["davenport", "--ell", "5"]);
    assert_eq!(v["confirmed"], true);
    let v = json(&["lemma-checks", "--limit", "2000"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn binary_exit_codes_and_env_cap() {
    let bin = env!("CARGO_BIN_EXE_cycloscope");
    let ok = Command::new(bin).args(["member", "7", "--ell", "2"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["member", "4", "--ell", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let capped = Command::new(bin)
        .args(["survey", "--ell", "2", "--limit", "5000"])
        .env("CYCLOSCOPE_MAX_SIEVE", "1000")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
    let malformed = Command::new(bin)
        .args(["member", "7", "--ell", "2"])
        .env("CYCLOSCOPE_MAX_SIEVE", "lots")
        .output()
        .unwrap();
    assert_eq!(malformed.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
