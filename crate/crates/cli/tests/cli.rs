use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn detkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_detkit")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

const NORMAL_CROSSING: &str = "# xy = t^2\nvars: x y\nideal: x*y - t^2\nperturbed: x*y - t^2 - t^9\nk: 9\n";

#[test]
fn bound_summary_and_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "nc.txt", NORMAL_CROSSING);
    let out = detkit(&["bound", &file]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("threshold_k: 9"), "{text}");

    let out = detkit(&["bound", &file, "--json"]);
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "bound");
    assert_eq!(v["results"]["n"], 2);
    assert_eq!(v["run_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn lift_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "nc.txt", NORMAL_CROSSING);
    let cert = dir.path().join("lift.json");
    let out = detkit(&["lift", &file, "--order", "16", "--out", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = detkit(&["verify", cert.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["accepted"], true);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["results"]["map"][0] = Value::String("x + t^8*x".into());
    let tampered = write(dir.path(), "tampered.json", &doc.to_string());
    let out = detkit(&["verify", &tampered]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unsupported_bound_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "d.txt", "vars: x y w\nideal: x*y - w^2*t\n");
    let out = detkit(&["bound", &file, "--cap", "8", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["results"]["exit_code"], 1);
}

#[test]
fn syntax_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.txt", "vars: x y\nideal: x*y - u\n");
    let out = detkit(&["t1", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("2:14"), "{err}");
    assert_eq!(detkit(&["t1", "/nonexistent/problem"]).status.code(), Some(2));
    assert_eq!(detkit(&["oracle", &file, "--box", "0,2"]).status.code(), Some(2));
}

#[test]
fn empty_ideal_has_zero_t1() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "e.txt", "vars: x y\nideal:\n");
    let out = detkit(&["t1", &file, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["zero"], true);
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "nc.txt", NORMAL_CROSSING);
    let a = detkit(&["lift", &file, "--order", "12", "--json"]).stdout;
    let b = detkit(&["lift", &file, "--order", "12", "--json"]).stdout;
    assert_eq!(a, b);
}
