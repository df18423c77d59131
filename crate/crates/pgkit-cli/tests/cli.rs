use std::process::{Command, Output};

use serde_json::Value;

fn pgkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgkit")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("JSON line")).collect()
}

fn one(args: &[&str]) -> Value {
    let out = pgkit(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let mut v = lines(&out);
    assert_eq!(v.len(), 1);
    v.remove(0)
}

#[test]
fn spoke_reports_the_centre_depth() {
    let v = one(&["spoke", "gbg1v1v1p1p1v1x0x0p0x1x0"]);
    assert_eq!(v, serde_json::json!({"spoke": true, "center_depth": 2}));
    let v = one(&["spoke", "gbg1v1p1v1x0p0x1v1x0p0x1"]);
    assert_eq!(v["spoke"], true);
    let v = one(&["spoke", "gbg1v1p1v1x1p1x1"]);
    assert_eq!(v, serde_json::json!({"spoke": false, "center_depth": null}));
}

#[test]
fn norm_of_a3_is_root_two() {
    let v = one(&["norm", "gbg1v1"]);
    assert!((v["norm"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn parse_and_weights() {
    let v = one(&["parse", "bwd1v1v1v1p1v1x0p0x1v1x0p0x1duals1v1v1x2v2x1"]);
    assert_eq!(v["vertices"], 10);
    assert_eq!(v["edges"], 9);
    assert_eq!(v["supertransitivity"], 3);
    let v = one(&["weights", "gbg1v1"]);
    let w: Vec<Vec<f64>> = serde_json::from_value(v["weights"].clone()).unwrap();
    assert!((w[1][0] - 2f64.sqrt()).abs() < 1e-9 && (w[2][0] - 1.0).abs() < 1e-9);
}

#[test]
fn stable_and_verdict() {
    assert_eq!(one(&["stable", "gbg1v1v1p1p1v1x0x0p0x1x0", "--depth", "1"])["stable"], true);
    assert_eq!(one(&["stable", "gbg1v1v1p1p1v1x0x0p0x1x0", "--depth", "2"])["stable"], false);
    let ah = pgkit::catalog::ASAEDA_HAAGERUP;
    let v = one(&["verdict", ah.0, ah.1]);
    assert_eq!(v, serde_json::json!({"one_strand": false, "two_strand_plus": false, "two_strand_minus": false}));
    let h = pgkit::catalog::HAAGERUP;
    let v = one(&["verdict", h.0, h.1]);
    assert_eq!(v["two_strand_plus"], true);
    assert_eq!(v["one_strand"], false);
}

#[test]
fn qt_eliminates_odd_n() {
    assert_eq!(one(&["qt", "--n", "3", "--delta", "2.2", "--r", "1.1"])["status"], "eliminated");
    let v = one(&["qt", "--n", "4", "--delta", "2.0743132939", "--r", "1.0"]);
    assert_eq!(v["status"], "survives");
    assert!((v["omega_sum"].as_f64().unwrap() + 2.0).abs() < 1e-6);
}

#[test]
fn eval_agrees_with_direct_evaluation() {
    let v = one(&["eval", &fixture("u_rot2_u.sexp"), "--system", &fixture("two_strand_u.json")]);
    assert_eq!(v["value"], "205/4");
    assert_eq!(v["direct"], "205/4");
    assert_eq!(v["agree"], true);
    let v = one(&["eval", &fixture("u_rot2_u.sexp"), "--system", &fixture("two_strand_u_float.json")]);
    assert_eq!(v["agree"], true);
    assert!((v["value"].as_str().unwrap().parse::<f64>().unwrap() - 51.25).abs() < 1e-9);
}

#[test]
fn classify_emits_json_lines() {
    let out = pgkit(&["classify", &fixture("haagerup_depth0.json")]);
    assert!(out.status.success());
    let v = lines(&out);
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["status"], "survives");
    let out = pgkit(&["classify", &fixture("a2_small.json")]);
    assert!(out.status.success());
    for r in lines(&out) {
        assert!(["eliminated", "survives", "needs_external"].contains(&r["status"].as_str().unwrap()));
    }
    let out = pgkit(&["classify", "--table", &fixture("a2_small.json")]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("status"));
}

#[test]
fn exit_codes() {
    assert_eq!(pgkit(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(pgkit(&[]).status.code(), Some(64));
    assert_eq!(pgkit(&["norm", "gbg1x"]).status.code(), Some(1));
    assert_eq!(pgkit(&["qt", "--n", "4", "--delta", "2.5", "--r", "0.5"]).status.code(), Some(1));
    assert_eq!(
        pgkit(&["eval", &fixture("unbalanced.sexp"), "--system", &fixture("two_strand_u.json")]).status.code(),
        Some(1)
    );
    assert_eq!(pgkit(&["classify", &fixture("missing.json")]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_pgkit"))
        .args(["classify", &fixture("star10_huge.json")])
        .env("PGKIT_NODE_BUDGET", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!lines(&out).is_empty(), "partial report is printed");
}
