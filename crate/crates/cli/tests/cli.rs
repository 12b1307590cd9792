//! End-to-end runs of the `monosite` binary.

use std::process::{Command, Output};

use serde_json::Value;

const SCHEMA: &str = include_str!("../schema/output.schema.json");

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_monosite"));
    cmd.args(args).env_remove("MONOSITE_JOBS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = run_env(args, &[]);
    let doc: Value = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    let schema: Value = serde_json::from_str(SCHEMA).expect("schema is JSON");
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = validator.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations {errors:?} in {doc}");
    (out.status.code().expect("exit code"), doc)
}

#[test]
fn typical_cubic_is_not_a_site() {
    let (code, doc) = run(&[
        "classify",
        "--field",
        "7",
        "--ring",
        "x,y",
        "x^3+y^3+x*y",
        "x",
    ]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["verdict"], "no");
    assert_eq!(doc["result"]["method"], "structural");
}

#[test]
fn cusp_cube_decomposes() {
    let (code, doc) = run(&["decompose", "--field", "q", "--ring", "x,y", "(x^2-y^3)^3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["m1"], "x^2");
    assert_eq!(doc["result"]["m2"], "y^3");
    assert_eq!(doc["result"]["degree"], 3);
}

#[test]
fn spectrum_of_xy() {
    let (code, doc) = run(&["spectrum", "--field", "7", "--ring", "x,y", "x*y", "1"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["values"], serde_json::json!(["0"]));
    assert_eq!(doc["result"]["bound"], 4);
    assert_eq!(doc["result"]["bound_satisfied"], true);
}

#[test]
fn oracle_verdict_carries_transcript() {
    let (code, doc) = run(&["classify", "--field", "7", "y*(x+y)*(y^2+x*y-2*x)", "x^2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["method"], "oracle");
    assert_eq!(doc["result"]["witness"]["kind"], "oracle");
    assert_eq!(doc["result"]["witness"]["generically_irreducible"], false);
}

#[test]
fn generic_test_reports_witness() {
    let (code, doc) = run(&["generic-test", "--field", "7", "x^3+y^3+x^2*y", "x", "y"]);
    assert_eq!(code, 0);
    assert!(doc["result"]["witness_polynomial"].is_string());
}

#[test]
fn pure_power_and_newton() {
    let (code, doc) = run(&["pure-power", "x^2+2*x*y+y^2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["exponent"], 2);
    let (code, doc) = run(&["pure-power", "x^2+y"]);
    assert_eq!(code, 1);
    assert_eq!(doc["result"]["pure_power"], false);
    let (code, doc) = run(&["newton", "x^2+x*y^3"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["points"], serde_json::json!([[1, 3], [2, 0]]));
}

#[test]
fn fixtures_all_pass() {
    let (code, doc) = run(&["verify-paper-fixtures"]);
    assert_eq!(code, 0, "{doc}");
    assert_eq!(doc["result"]["failed"], 0);
}

#[test]
fn syntax_error_has_offset() {
    let (code, doc) = run(&["newton", "x + + y"]);
    assert_eq!(code, 2);
    let err = &doc["error"];
    assert_eq!(err["error_kind"], "input");
    assert_eq!(err["location"]["argument"], "polynomial");
    assert_eq!(err["location"]["offset"], 4);
    assert_eq!(err["location"]["source"], "x + + y");
}

#[test]
fn bad_monomial_is_located() {
    let (code, doc) = run(&["classify", "x^2+y", "y", "2x"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["location"]["argument"], "monomials[1]");
}

#[test]
fn bad_field_and_ring() {
    let (code, doc) = run(&["--field", "6", "newton", "x"]);
    assert_eq!(code, 2);
    assert!(doc["config"]["field_descriptor"].is_null());
    let (code, doc) = run(&["--ring", "x,x", "newton", "x"]);
    assert_eq!(code, 2);
    assert!(doc["config"].is_null());
}

#[test]
fn oracle_needs_a_finite_field() {
    let (code, doc) = run(&["spectrum", "x*y", "1"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["error_kind"], "precondition");
}

#[test]
fn oversized_instances_exit_three() {
    let (code, doc) = run(&["spectrum", "--field", "7", "x^7+y^7+x*y", "1"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["error_kind"], "instance_too_large");
}

#[test]
fn output_is_byte_identical() {
    let args = ["classify", "--field", "7", "y*(x+y)*(y^2+x*y-2*x)", "x^2"];
    let base = run_env(&args, &[]).stdout;
    assert_eq!(base, run_env(&args, &[]).stdout);
    for jobs in ["1", "4"] {
        let mut with_flag = args.to_vec();
        with_flag.extend(["--jobs", jobs]);
        assert_eq!(base, run_env(&with_flag, &[]).stdout);
        assert_eq!(base, run_env(&args, &[("MONOSITE_JOBS", jobs)]).stdout);
    }
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("monosite-out-{}.json", std::process::id()));
    let path_str = path.to_str().expect("utf-8 temp path");
    let out = run_env(&["--out", path_str, "newton", "x*y"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("file written")).expect("JSON");
    assert_eq!(doc["config"]["out"], path_str);
    std::fs::remove_file(path).ok();
}
