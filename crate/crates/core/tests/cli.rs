use std::process::{Command, Output};

use serde_json::Value;
use sidorenko_local::kernel::KernelSampler;
use sidorenko_local::scalar::rat_int;
use sidorenko_local::StepKernel;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sidorenko")).args(args).env("SIDORENKO_THREADS", "1").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn density_of_an_edge_under_the_constant_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("k2.json");
    let kernel = dir.path().join("one.json");
    std::fs::write(&graph, r#"{"first": ["a"], "second": ["b"], "edges": [["a", "b"]]}"#).unwrap();
    std::fs::write(&kernel, r#"{"row_measures": ["1"], "col_measures": ["1"], "values": [["1"]]}"#).unwrap();
    let out = run(&["density", graph.to_str().unwrap(), kernel.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out), serde_json::json!({ "value": "1" }));
}

#[test]
fn named_inputs_and_float_mode() {
    let out = run(&["density", "C4", "const:1/2"]);
    assert_eq!(stdout_json(&out)["value"], "1/16");
    let out = run(&["--mode", "float", "density", "C4", "const:1/2"]);
    assert_eq!(stdout_json(&out)["value"], 0.0625);
}

#[test]
fn sample_round_trips() {
    let out = run(&["sample", "--blocks", "2x3", "--seed", "5", "--random-measures", "--range", "-1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let parsed = StepKernel::from_json_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap().0;
    let direct = KernelSampler::new(2, 3).range(rat_int(-1), rat_int(1)).grid(8).random_measures(true).sample(5);
    assert_eq!(parsed, direct);
}

#[test]
fn output_file_and_pretty_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = run(&["--pretty", "-o", path.to_str().unwrap(), "hom", "P3", "K3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("hom(F, G) = 12"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["value"], "12");
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let out = run(&["verify", "C4", "const:1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "certified");
    // far from the constant kernel: the hypotheses fail
    let out = run(&["verify", "C4", "const:3/2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["verdict"], "hypotheses-failed");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"first\": [\"a\"],\n  oops}").unwrap();
    let out = run(&["density", bad.to_str().unwrap(), "const:1"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("line 2"));

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["density", "C4", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["density", "C5", "const:1"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "C4", "const:1", "--variant", "reg"]).status.code(), Some(2));
}

#[test]
fn cap_errors_report_the_cap() {
    let out = run(&["certify-graph", "K25", "P3", "--eps", "1/1000000000000"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["cap"]["limit"], "24");
}

#[test]
fn list_and_single_check() {
    let out = run(&["list"]);
    assert_eq!(stdout_json(&out).as_array().unwrap().len(), 28);
    let out = run(&["check", "CYCLE", "--trials", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);
}
