use periodforge::cli::{run, EXIT_INVALID, EXIT_OK, EXIT_TARGET_MISSED};
use serde_json::Value;
use std::path::PathBuf;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("periodforge").chain(args.iter().copied()).map(String::from).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("periodforge-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn psi_of_sunrise_file() {
    let path = scratch("sunrise.g", "v 1\nv 2\ne 1 1 2\ne 2 1 2\ne 3 1 2\n");
    let (code, out, _) = call(&["psi", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "x1*x2 + x1*x3 + x2*x3");
}

#[test]
fn residue_hits_target() {
    let (code, v) = call_json(&["residue", "wheel3", "--samples", "20000", "--seed", "1", "--target", "6*zeta(3)"]);
    assert_eq!(code, EXIT_OK, "{v}");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["manifest"]["seed"], 1);
    assert_eq!(v["manifest"]["samples"], 20000);
    assert!(v["result"]["z"].as_f64().unwrap().abs() <= 3.0);
}

#[test]
fn residue_misses_wrong_target() {
    let (code, _, _) = call(&["residue", "wheel3", "--samples", "20000", "--seed", "1", "--target", "7*zeta(3)"]);
    assert_eq!(code, EXIT_TARGET_MISSED);
}

#[test]
fn reruns_are_identical() {
    let args = ["residue", "wheel3", "--samples", "5000", "--seed", "9"];
    let (_, mut a) = call_json(&args);
    let (_, mut b) = call_json(&args);
    a["manifest"]["wall_time_ms"] = Value::Null;
    b["manifest"]["wall_time_ms"] = Value::Null;
    assert_eq!(a, b);
    let (_, mut c) = call_json(&["--threads", "2", "residue", "wheel3", "--samples", "5000", "--seed", "9"]);
    assert_eq!(a["result"], c["result"]);
    c["manifest"]["wall_time_ms"] = Value::Null;
    assert_ne!(a["manifest"], c["manifest"]);
}

#[test]
fn invalid_input_exit_code() {
    assert_eq!(call(&["psi", "no-such-graph"]).0, EXIT_INVALID);
    assert_eq!(call(&["residue", "dunce", "--samples", "100"]).0, EXIT_INVALID);
    assert_eq!(call(&["residue", "wheel3", "--target", "zeta(", "--samples", "100"]).0, EXIT_INVALID);
    assert_eq!(call(&["canonical", "wheel3", "--form", "3"]).0, EXIT_INVALID);
    assert_eq!(call(&["torelli", "sunrise", "--lengths", "1,0,2"]).0, EXIT_INVALID);
    assert_eq!(call(&["frobnicate"]).0, EXIT_INVALID);
    let bad = scratch("bad.g", "v 1\ne 1 1 2\n");
    let (code, _, err) = call(&["psi", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn canonical_integral() {
    let (code, v) = call_json(&["canonical", "wheel3", "--form", "5", "--samples", "20000", "--seed", "2", "--target", "60*zeta(3)"]);
    assert_eq!(code, EXIT_OK, "{v}");
}

#[test]
fn homology_and_stable_graphs() {
    let (code, v) = call_json(&["gc-homology", "--loops", "3"]);
    assert_eq!(code, EXIT_OK);
    let text = v["result"].to_string();
    assert!(text.contains("\"homology\":1"), "{text}");
    let (code, out, _) = call(&["gc-homology", "--loops", "4"]);
    assert_eq!(code, EXIT_OK);
    for line in out.lines().skip(2) {
        assert!(line.trim_end().ends_with(" 0"), "{line}");
    }
    assert_eq!(call(&["gc-homology", "--loops", "7"]).0, EXIT_INVALID);
    let (_, v) = call_json(&["stable", "--genus", "2"]);
    assert_eq!(v["result"]["count"], 7);
}

#[test]
fn forms_and_cells() {
    let path = scratch("hex.txt", "2\n1 1/2\n1/2 1\n");
    let (code, out, _) = call(&["minvec", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().filter(|l| l.starts_with('[')).count(), 6);
    let (_, v) = call_json(&["cell", path.to_str().unwrap()]);
    assert_eq!(v["result"]["generators"].as_array().unwrap().len(), 3);
    let singular = scratch("flat.txt", "2\n1 1\n1 1\n");
    assert_eq!(call(&["minvec", singular.to_str().unwrap()]).0, EXIT_INVALID);
}

#[test]
fn torelli_and_laplacian() {
    let (code, out, _) = call(&["torelli", "sunrise", "--lengths", "1,2,3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().collect::<Vec<_>>(), vec!["2", "3 1", "1 4"]);
    let (_, out, _) = call(&["laplacian", "sunrise"]);
    assert!(out.contains("x1 + x2"));
    let (_, out, _) = call(&["divergences", "dunce"]);
    assert!(out.contains("{3,4}"));
}
