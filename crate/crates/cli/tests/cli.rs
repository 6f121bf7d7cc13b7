use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hodgemod")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn eisenstein_g4_head() {
    let v = json(&["eisenstein", "--weight", "4", "--terms", "4"]);
    assert_eq!(v["coeffs"], serde_json::json!(["1/240", "1", "9", "28"]));
    let v = json(&["eisenstein", "--weight", "6", "--terms", "1"]);
    assert_eq!(v["coeffs"][0], "-1/504");
}

#[test]
fn weight_twelve_relation() {
    let v = json(&["relations", "--weight", "12"]);
    assert_eq!(v["kernel"], serde_json::json!([["1", "-3"]]));
    assert_eq!(v["pairs"], serde_json::json!([[1, 4], [2, 3]]));
    assert_eq!(v["period_match"]["exact_member"], true);
    assert!(v["period_match"]["numeric_relative_deviation"].as_f64().unwrap() < 1e-8);
}

#[test]
fn weight_sixteen_relation() {
    let v = json(&["relations", "--weight", "16"]);
    assert_eq!(v["kernel"], serde_json::json!([["2", "-7", "11"]]));
}

#[test]
fn weights_without_cusp_forms_have_no_relations() {
    for w in ["6", "8", "10", "14"] {
        assert_eq!(json(&["relations", "--weight", w])["kernel"], serde_json::json!([]), "weight {w}");
    }
}

#[test]
fn period_space_dimensions() {
    assert_eq!(json(&["period-space", "--weight", "4"])["dimension"], 1);
    assert_eq!(json(&["period-space", "--weight", "12"])["dimension"], 3);
    let plus = json(&["period-space", "--weight", "12", "--part", "plus", "--cuspidal"]);
    assert_eq!(plus["dimension"], 1);
    assert_eq!(plus["basis"][0], serde_json::json!(["0", "0", "1", "0", "-3", "0", "3", "0", "-1", "0", "0"]));
}

#[test]
fn period_space_json_round_trips() {
    let out = run(&["period-space", "--weight", "16", "--part", "minus"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, String::from_utf8(out.stdout).unwrap());
}

#[test]
fn csv_table_for_period_space() {
    let out = run(&["--format", "csv", "period-space", "--weight", "12"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("basis_index,exponent_of_a,coefficient"));
    assert!(lines.all(|l| l.split(',').count() == 3));
}

#[test]
fn epsilon_two() {
    let v = json(&["epsilon", "--weight", "2"]);
    assert_eq!(v["der0"], true);
    assert_eq!(v["highest_weight"], true);
    assert_eq!(v["degree"], 2);
}

#[test]
fn numeric_delta_period_polynomial() {
    let v = json(&["period-numeric", "--weight", "12"]);
    assert_eq!(v["weight"], 12);
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 11);
    // even powers of a carry the real part, odd powers the imaginary part
    for (m, c) in coeffs.iter().enumerate() {
        let idle = if m % 2 == 0 { c[1].as_f64().unwrap() } else { c[0].as_f64().unwrap() };
        assert!(idle.abs() < 1e-10, "m = {m}: {c}");
    }
}

#[test]
fn cocycle_check_passes_for_generators() {
    let v = json(&["cocycle-check", "--gamma", "S", "--mu", "T"]);
    assert_eq!(v["within_tolerance"], true);
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["relations", "--weight", "9"]).status.code(), Some(1));
    assert_eq!(run(&["eisenstein", "--weight", "3"]).status.code(), Some(1));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--tolerance", "2", "selftest"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "csv", "eisenstein", "--weight", "4"]).status.code(), Some(2));
    let err = run(&["relations", "--weight", "9"]);
    assert!(String::from_utf8_lossy(&err.stderr).starts_with("error:"));
}
