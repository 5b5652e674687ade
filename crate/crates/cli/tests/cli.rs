use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn srbm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srbm")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = srbm(args);
    let code = out.status.code().expect("exit code");
    let doc = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, doc)
}

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().expect("object").keys().cloned().collect()
}

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn path_str(p: &std::path::Path) -> &str {
    p.to_str().expect("utf-8 path")
}

#[test]
fn bek_classify_reports_gain_eight() {
    let (code, doc) = run(&["classify", path_str(&problem("bek.json"))]);
    assert_eq!(code, 10);
    assert_eq!(doc["decision"], "NotPositiveRecurrent");
    assert_eq!(doc["basis"], "SpiralGainGE1");
    assert_eq!(doc["certificate"]["beta"], "8");
    assert_eq!(doc["certificate_valid"], true);
}

#[test]
fn bek_float_mode_agrees() {
    let (code, doc) = run(&["classify", path_str(&problem("bek_float.json"))]);
    assert_eq!(code, 10);
    assert_eq!(doc["mode"], "float");
    assert_eq!(doc["basis"], "SpiralGainGE1");
    assert!((doc["certificate"]["beta"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn category_one_is_cited() {
    let (code, doc) = run(&["classify", path_str(&problem("category_1.json"))]);
    assert_eq!(code, 10);
    assert_eq!(doc["basis"], "DivergentLcpExists");
    assert_eq!(doc["certificate"]["category"], "I");
    assert_eq!(doc["certificate"]["u"], serde_json::json!(["1", "0", "0"]));
}

#[test]
fn identity_is_positive_recurrent() {
    let (code, doc) = run(&["classify", path_str(&problem("identity_stable.json"))]);
    assert_eq!(code, 0);
    assert_eq!(doc["decision"], "PositiveRecurrent");
}

#[test]
fn two_dimensional_rule() {
    let (code, doc) = run(&["classify", path_str(&problem("two_d_not_p.json"))]);
    assert_eq!((code, doc["basis"].as_str()), (10, Some("TwoD_Fails")));
    let (code, doc) = run(&["classify", path_str(&problem("two_d_identity.json"))]);
    assert_eq!((code, doc["basis"].as_str()), (0, Some("TwoD_PMatrix")));
}

#[test]
fn fluid_csv_has_spiral_breakpoints() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("fluid.csv");
    let (code, doc) = run(&[
        "fluid",
        path_str(&problem("bek.json")),
        "--z0",
        "0,0,1",
        "--trace-csv",
        path_str(&csv_path),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["verdict"], "SpiralGrowth");
    assert_eq!(doc["factor"], "8");

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["t", "z1", "z2", "z3", "y1", "y2", "y3", "active_set"]);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().skip(1).take(3).map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows[1], [2.0, 0.0, 0.0]);
    assert_eq!(rows[2], [0.0, 4.0, 0.0]);
    assert_eq!(rows[3], [0.0, 0.0, 8.0]);
}

#[test]
fn normalize_recovers_canonical_bek() {
    let (code, doc) = run(&["normalize", path_str(&problem("bek_scaled.json"))]);
    assert_eq!(code, 0);
    let (_, canonical) = run(&["normalize", path_str(&problem("bek.json"))]);
    assert_eq!(doc["normalized"]["theta"], canonical["normalized"]["theta"]);
    assert_eq!(doc["normalized"]["R"], canonical["normalized"]["R"]);
    assert_eq!(doc["canonical"], true);
}

#[test]
fn zero_horizon_simulation_censors_immediately() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("sim.csv");
    let (code, doc) = run(&[
        "simulate",
        path_str(&problem("identity_stable.json")),
        "--paths",
        "1",
        "--horizon",
        "0",
        "--trace-csv",
        path_str(&csv_path),
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["stats"]["n_censored"], 1);
    assert_eq!(doc["trace"]["samples"], 0);
    let text = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(text.trim(), "t,z1,z2,z3,y1,y2,y3");
}

#[test]
fn malformed_file_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"dim\": 3,").unwrap();
    let out = srbm(&["classify", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "InputError");
    assert!(err["error"]["message"].is_string());
}

#[test]
fn mixed_modes_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let mixed = dir.path().join("mixed.json");
    std::fs::write(&mixed, r#"{"dim":2,"theta":["-1",-1],"R":[[1,0],[0,1]]}"#).unwrap();
    assert_eq!(srbm(&["classify", path_str(&mixed)]).status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_two() {
    let out = srbm(&["classify", "--no-such-flag", path_str(&problem("bek.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_key_sets_are_stable() {
    let (_, doc) = run(&["classify", path_str(&problem("category_4.json"))]);
    assert_eq!(
        keys(&doc),
        set(&["mode", "dim", "decision", "basis", "certificate", "certificate_valid", "normalized", "diagnostics", "notes"])
    );
    assert_eq!(keys(&doc["diagnostics"]), set(&["condition_15", "spiral", "lcp_solutions"]));

    let (_, doc) = run(&["lcp", path_str(&problem("category_4.json"))]);
    assert_eq!(keys(&doc), set(&["mode", "condition_15", "solutions"]));
    let solution = &doc["solutions"][0];
    assert_eq!(
        keys(solution),
        set(&["u", "v", "stable", "degenerate", "proper", "category", "rhat", "det_rhat"])
    );

    let (_, doc) = run(&["spiral", path_str(&problem("bek.json"))]);
    assert_eq!(
        keys(&doc),
        set(&["mode", "membership", "beta", "theta_negative", "comparisons", "a", "b", "normalized", "certificate"])
    );

    let (_, doc) = run(&["normalize", path_str(&problem("bek.json"))]);
    assert_eq!(keys(&doc), set(&["mode", "drift_scaling", "column_scaling", "normalized", "canonical"]));

    let (_, doc) = run(&["fluid", path_str(&problem("identity_stable.json"))]);
    assert_eq!(keys(&doc), set(&["mode", "z0", "verdict", "factor", "breakpoints"]));
    assert_eq!(doc["verdict"], "AttractedToOrigin");

    let (_, doc) = run(&["simulate", path_str(&problem("identity_stable.json")), "--paths", "2", "--horizon", "1"]);
    assert_eq!(keys(&doc), set(&["mode", "z0", "config", "stats", "trace"]));
}

#[test]
fn category_four_lists_both_solutions() {
    let (_, doc) = run(&["lcp", path_str(&problem("category_4.json"))]);
    let categories: BTreeSet<String> = doc["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|s| s["category"].as_str().map(String::from))
        .collect();
    assert!(categories.contains("I"));
    assert!(categories.contains("IV"));
}

#[test]
fn spiral_certificate_for_bek() {
    let (code, doc) = run(&["spiral", path_str(&problem("bek.json"))]);
    assert_eq!(code, 0);
    assert_eq!(doc["beta"], "8");
    assert_eq!(doc["certificate"], serde_json::json!(["1/7", "4/7", "2/7"]));
}
