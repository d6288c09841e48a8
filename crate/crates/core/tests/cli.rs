use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitforge"))
        .args(args)
        .env("ORBITFORGE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("orbitforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_reports_definitive_verdicts() {
    let out = run(&["check", "--weight", "ex52_v1", "--shifts", "half_line_pos", "--criterion", "pointwise"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["reports"][0]["verdict"]["type"], "holds_certified");
    assert_eq!(v["config"]["command"], "check");
}

#[test]
fn finite_grid_failure_is_inconclusive() {
    let out = run(&["check", "--weight", "constant_one", "--gamma", "grid:0.5,2", "--criterion", "pointwise"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["reports"][0]["verdict"]["type"], "inconclusive");
}

#[test]
fn bad_input_exits_with_one() {
    let out = run(&["check", "--weight", r#"{"space":"Z","window":{"lo":0,"values":[-1]}}"#]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["check", "--weight", "ex52_v1", "--gamma", "annulus:2,1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn synthesized_candidate_verifies_and_tampering_is_caught() {
    let path = scratch("candidate.json");
    let out = run(&[
        "synth", "--weight", "twosided_exp", "--gamma", "singleton:1", "--steps", "6",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let verify = run(&["verify", "--candidate", path.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(0));
    assert_eq!(json_of(&verify)["verified"], true);

    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entries = v["candidate"]["components"][0]["entries"].as_array_mut().unwrap();
    let last = entries.last_mut().unwrap();
    last["re"] = Value::from(last["re"].as_f64().unwrap() + 10.0);
    let bad = scratch("tampered.json");
    std::fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let verify = run(&["verify", "--candidate", bad.to_str().unwrap()]);
    assert_eq!(verify.status.code(), Some(1));
    assert_eq!(json_of(&verify)["verified"], false);
}

#[test]
fn synth_without_decay_is_inconclusive() {
    let out = run(&["synth", "--weight", "constant_one", "--gamma", "singleton:1", "--steps", "3", "--horizon", "64"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["inconclusive"]["step"], 1);
}

#[test]
fn repro_writes_csv() {
    let out = run(&["repro", "claim2", "--n", "3..3", "--p", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,p,segment_integral,closed_form,lower_bound,ratio,probe_norm_pow"));
    assert!(lines.next().unwrap().starts_with("3,1,"));
    assert_eq!(run(&["repro", "nope"]).status.code(), Some(1));
}

#[test]
fn mnorm_and_norm() {
    let out = run(&["mnorm", "--weight", "ex52_v1", "--s", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["m"]["value"], 2.0);
    let out = run(&["norm", "--weight", "constant_one", "--p", "2", "--vector", r#"{"space":"Z","entries":[{"point":0,"re":3},{"point":5,"im":4}]}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["weighted_norm"], 5.0);
}
