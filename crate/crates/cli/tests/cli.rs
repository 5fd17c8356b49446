use std::process::{Command, Output};

use serde_json::Value;

fn tlblob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlblob")).args(args).env_remove("TLBLOB_JOBS").output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = tlblob(args);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{}: {}", e, String::from_utf8_lossy(&out.stderr));
    });
    (v, out.status.code().unwrap())
}

#[test]
fn enumerate_zero_b_n4() {
    let (v, code) = json(&["enumerate", "--mode", "0b", "--N", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "tlblob/1");
    let dims: Vec<(u64, u64)> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["L"].as_u64().unwrap(), r["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(dims, vec![(4, 1), (2, 3), (0, 2)]);
    assert_eq!(dims.iter().map(|d| d.1).sum::<u64>(), 6);
}

#[test]
fn enumerate_sector_filter() {
    let (v, _) = json(&["enumerate", "--mode", "2b", "--N", "4", "--sector", "2:bb"]);
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["sector"], "bb");
}

#[test]
fn amplitudes_two_b_row() {
    let out = tlblob(&["amplitudes", "--mode", "2b", "--N", "4", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("table,mode,nb,L,sector,L_gamma,sector_gamma,value\n"));
    assert!(text.lines().any(|l| l == "D,2b,0,2,bb,,,ell_l*ell_r"), "{}", text);
}

#[test]
fn amplitudes_with_nb() {
    let out = tlblob(&["amplitudes", "--mode", "2b", "--nb", "1", "--N", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "D,2b,1,2,bb,,,ell_l*ell_r - 1"), "{}", text);
}

#[test]
fn partition_smallest() {
    let (v, code) = json(&["partition", "--N", "2", "--M", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][0]["Z"], "ell^2 + n");
    assert_eq!(v["results"][0]["pass"], true);
}

#[test]
fn gram_case_passes() {
    let (v, code) = json(&["gram", "--id", "2B-strings-bb", "--N", "4"]);
    assert_eq!(code, 0);
    assert!(v["results"].as_array().unwrap().iter().all(|r| r["status"] == "pass"));
    assert!(v["results"][0].get("elapsed").is_none());
}

#[test]
fn output_is_deterministic() {
    let args = ["partition", "--mode", "2b", "--N", "4", "--M", "1..2", "--nb", "1"];
    assert_eq!(tlblob(&args).stdout, tlblob(&args).stdout);
    let args = ["gram", "--mode", "1b", "--N", "2..4", "--format", "text"];
    assert_eq!(tlblob(&args).stdout, tlblob(&args).stdout);
}

#[test]
fn single_criterion() {
    let (v, code) = json(&["verify-all", "--only", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["criteria"][0]["status"], "PASS");
}

#[test]
fn failures_give_nonzero_exit_with_counterexamples() {
    // criterion 10 includes the printed hyperbolic form of the two-boundary determinant, which does not hold
    let (v, code) = json(&["verify-all", "--only", "10"]);
    assert_eq!(code, 1);
    let c = &v["results"]["criteria"][0];
    assert_eq!(c["status"], "FAIL");
    assert!(!c["counterexamples"].as_array().unwrap().is_empty());
}

#[test]
fn guard_rail_refuses_large_n() {
    let out = tlblob(&["gram", "--id", "M-det", "--N", "12", "--L", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("--force") && err.contains("Gram matrix of size"), "{}", err);
}

#[test]
fn invalid_flags_print_usage() {
    let out = tlblob(&["enumerate", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = tlblob(&["enumerate", "--mode", "3b"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("possible values"));
    let out = tlblob(&["enumerate", "--lambda-l", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
