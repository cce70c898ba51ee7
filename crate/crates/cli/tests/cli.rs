use std::io::Write;
use std::process::{Command, Output, Stdio};

fn ddouble(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ddouble")).args(args).output().expect("spawn ddouble")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn info_small_case() {
    let o = ddouble(&["info", "--n", "2", "--d", "2", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut dims: Vec<u64> = v["simples"].as_array().unwrap().iter().map(|s| s["dim"].as_u64().unwrap()).collect();
    dims.sort();
    assert_eq!(dims, vec![1, 1, 2, 2]);
    assert_eq!(v["isolated_vertices"], 2);
    assert_eq!(v["cycles"], serde_json::json!([2]));
}

#[test]
fn info_counts_projective_simples() {
    let o = ddouble(&["info", "--n", "3", "--d", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["projective_simples"], 3);
}

#[test]
fn rejects_indivisible_degree() {
    let o = ddouble(&["info", "--n", "3", "--d", "2"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("d must divide n"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
}

#[test]
fn tensor_both_modes_agree() {
    let o = ddouble(&["tensor", "L(1,0)", "L(1,0)", "--n", "2", "--d", "2", "--mode", "both"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("closed: P(0,1)\n"), "{out}");
    assert!(out.contains("engine: P(0,1)\n"), "{out}");
    assert!(out.ends_with("MATCH\n"), "{out}");
}

#[test]
fn tensor_band_fixture() {
    let o = ddouble(&["tensor", "C+(1,5,1,1)", "L(0,2)", "--n", "6", "--d", "6", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "MATCH");
    let labels: Vec<&str> = v["engine"]["summands"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, vec!["C+(1,1,1,-1)", "C+(1,2,1,1)", "L(1,3)"]);
}

#[test]
fn parse_error_names_grammar() {
    let o = ddouble(&["tensor", "L(0,0)", "X", "--n", "2", "--d", "2"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("\"X\""), "{err}");
    assert!(err.contains("M+(u,j,l)"), "{err}");
}

#[test]
fn module_json_round_trips_through_decompose() {
    let o = ddouble(&["module", "build", "M-(0,1,2)", "--n", "3", "--d", "3", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text);

    let mut child = Command::new(env!("CARGO_BIN_EXE_ddouble"))
        .args(["decompose", "--format", "json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let d = child.wait_with_output().unwrap();
    assert!(d.status.success(), "{}", stderr(&d));
    let dec: serde_json::Value = serde_json::from_str(&stdout(&d)).unwrap();
    assert_eq!(dec["certified"], true);
    assert_eq!(dec["summands"], serde_json::json!([{"label": "M-(0,1,2)", "multiplicity": 1}]));
}

#[test]
fn output_is_deterministic() {
    let args = ["green-table", "L(0,0)", "L(0,1)", "M+(0,0,1)", "--n", "3", "--d", "3", "--seed", "7"];
    let a = ddouble(&args);
    let b = ddouble(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn ar_dot_output() {
    let o = ddouble(&["ar", "--seed-label", "M+(0,0,1)", "--radius", "1", "--n", "3", "--d", "3", "--format", "dot"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("digraph ar {"), "{out}");
    assert!(out.contains("\"M+(0,0,1)\" -> \"M+(0,0,2)\";"), "{out}");
}

#[test]
fn hopf_bimodule_checks_pass() {
    let o = ddouble(&["hopf-bimodule", "--u", "0", "--j", "1", "--n", "3", "--d", "3", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["axiom_failures"], serde_json::json!([]));
    assert_eq!(v["closed_form_mismatches"], serde_json::json!([]));
    assert_eq!(v["pi_lower_triangular"], true);
    assert_eq!(v["twist"]["N"], 2);
}

#[test]
fn dim_guard_is_enforced() {
    let o = ddouble(&["hopf-bimodule", "--u", "0", "--j", "1", "--n", "3", "--d", "3", "--dim-guard", "4"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--dim-guard"), "{}", stderr(&o));
}
