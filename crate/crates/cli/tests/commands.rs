use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const RS: &str = "z*M^2 + (z-1)*M - 2";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler-hahn")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn info_reports_the_polygon() {
    let v = json(&["info", "--ell", "2", "--op", RS, "--json"]);
    assert_eq!(v["slopes"], serde_json::json!(["0", "1/2"]));
    assert_eq!(v["vertices"], serde_json::json!([["1", "0"], ["2", "0"], ["4", "1"]]));
    assert_eq!(v["neg_slopes"], serde_json::json!(["-1/2", "0"]));
    assert_eq!(v["d"], 2);
}

#[test]
fn tau_and_membership() {
    let v = json(&["tau", "--ell", "2", "--op", RS, "--json"]);
    assert_eq!(v["tau"], "1/8");
    assert_eq!(v["theta"], serde_json::json!({"1": "1/2", "2": "1/4"}));
    let v = json(&["membership", "--ell", "2", "--op", RS, "--value", "-1/4", "--json"]);
    assert_eq!(v["in_V"], true);
    let v = json(&["membership", "--ell", "2", "--op", RS, "--value", "1/3", "--json"]);
    assert_eq!(v["in_V"], false);
    assert_eq!(v["iota"], Value::Null);
}

#[test]
fn epsilon_with_trace() {
    let v = json(&["epsilon", "--ell", "2", "--op", RS, "--value", "-1/4", "--trace", "--json"]);
    assert_eq!(v["lower_bound"], "1/8");
    assert!(!v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn rset_and_solve_on_rudin_shapiro() {
    let v = json(&["rset", "--ell", "2", "--op", RS, "--height", "8", "--json"]);
    assert_eq!((v["H"].as_u64(), v["N"].as_str(), v["M"].as_u64()), (Some(2), Some("8"), Some(618)));
    assert_eq!(v["R"].as_array().unwrap().len(), 21);
    let v = json(&["solve", "--ell", "2", "--op", RS, "--height", "8", "--json", "--sequential"]);
    assert_eq!(v["dimension"], 1);
    let terms = v["restricted_basis"][0].as_array().unwrap();
    assert_eq!(terms.len(), 19);
    assert_eq!(terms[0], serde_json::json!({"exponent": "-1/2", "coefficient": "1"}));
    assert_eq!(terms[18], serde_json::json!({"exponent": "8", "coefficient": "-1/48"}));
    let again = run(&["solve", "--ell", "2", "--op", RS, "--height", "8", "--json"]);
    assert_eq!(serde_json::from_slice::<Value>(&again.stdout).unwrap(), v);
}

#[test]
fn verify_and_extend_round_trip() {
    let v = json(&["solve", "--ell", "2", "--op", RS, "--exponents", "-1/2,0,1", "--json"]);
    let full = scratch("rs_full.json", &v["basis"][0].to_string());
    let r = json(&["verify", "--ell", "2", "--op", RS, "--exponents", "-1/2,0,1", "--series", full.to_str().unwrap(), "--json"]);
    assert_eq!(r["certified"], true);
    let partial = scratch("rs_partial.json", r#"[{"exponent": "-1/2", "coefficient": "1"}]"#);
    let r = json(&["verify", "--ell", "2", "--op", RS, "--exponents", "-1/2,0,1", "--series", partial.to_str().unwrap(), "--json"]);
    assert_eq!(r["certified"], false);
    let f0 = scratch("intro_f0.json", r#"[{"exponent": "-1/2", "coefficient": "1"}]"#);
    let e = json(&["extend", "--ell", "2", "--op", "z^2*M^2 - (z^2+z)*M + z", "--series", f0.to_str().unwrap(), "--bound", "-1/16", "--json"]);
    assert_eq!(e["series"].as_array().unwrap().len(), 4);
}

#[test]
fn operator_files() {
    let path = scratch("rs_op.json", r#"{"ell": 2, "coefficients": ["-2", "z-1", "z"]}"#);
    let v = json(&["info", "--op-file", path.to_str().unwrap(), "--json"]);
    assert_eq!(v["operator"], "(z)*M^2 + (z - 1)*M + (-2)");
    let out = run(&["info", "--op-file", path.to_str().unwrap(), "--ell", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["info", "--ell", "2", "--op", "M^2 + M"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--ell", "2", "--op", "M - 1/z"]).status.code(), Some(2));
    assert_eq!(run(&["info", "--op", "M - 1"]).status.code(), Some(2));
    assert_eq!(run(&["epsilon", "--ell", "2", "--op", RS, "--value", "1/3"]).status.code(), Some(2));
    assert_eq!(run(&["rset", "--ell", "2", "--op", RS, "--height", "8", "--budget", "100"]).status.code(), Some(3));
    let f0 = scratch("intro_f0b.json", r#"[{"exponent": "-1/2", "coefficient": "1"}]"#);
    let out = run(&["extend", "--ell", "2", "--op", "z^2*M^2 - (z^2+z)*M + z", "--series", f0.to_str().unwrap(), "--bound", "0", "--limit", "20"]);
    assert_eq!(out.status.code(), Some(1));
}
