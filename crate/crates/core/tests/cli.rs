use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use heisenberg_homology::ribbon_graph::standard_model;

fn hhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhom")).args(args).output().expect("run hhom")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hhom-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn model_file_round_trip() {
    let (g, rel) = standard_model(1, 1).unwrap();
    let path = temp_file("torus.rg", &g.to_text(&rel));
    let out = hhom(&["invariants", path.to_str().unwrap()]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("genus 1\nboundary components 1\n"), "{s}");
    assert!(s.trim_end().ends_with("RESULT invariants ok"));

    let out = hhom(&["homology", "--relative", "--n", "2", path.to_str().unwrap()]);
    assert!(stdout(&out).contains("H2: rank 3"));
}

#[test]
fn relative_homology_of_the_torus() {
    let out = hhom(&["homology", "--model", "1,1", "--relative", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert!(s.contains("H0: rank 0\nH1: rank 0\nH2: rank 3\n"), "{s}");

    let out = hhom(&["homology", "--model", "1,1", "--relative", "--coeff", "linearized", "--format", "json"]);
    let s = stdout(&out);
    let json: serde_json::Value = serde_json::from_str(s.rsplit_once("RESULT").unwrap().0).unwrap();
    assert_eq!(json["homology"]["degrees"][2]["rank"], 12);
}

#[test]
fn phi_reports_the_group_element() {
    let out = hhom(&["phi", "--word", "a1 s1 b1", "--format", "json"]);
    let s = stdout(&out);
    let json: serde_json::Value = serde_json::from_str(s.rsplit_once("RESULT").unwrap().0).unwrap();
    assert_eq!(json["k"], "2");
    assert_eq!(json["x"], serde_json::json!(["1", "1"]));
    assert_eq!(json["normal_form"], "u·a1·b1");
}

#[test]
fn verify_twists_passes() {
    let out = hhom(&["verify", "--twists"]);
    assert_eq!(out.status.code(), Some(0));
    let s = stdout(&out);
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 3, "{s}");
    assert!(s.trim_end().ends_with("RESULT verify ok"));
}

#[test]
fn twist_matrices_render() {
    let s = stdout(&hhom(&["twist-matrices"]));
    assert!(s.contains("M_a:\n1 & 1 & -u + 1\n0 & u^2·a1^2 & 0\n0 & a1 & a1\n"), "{s}");
}

#[test]
fn input_errors() {
    let empty = temp_file("empty.rg", "");
    let out = hhom(&["invariants", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no vertices"));
    assert!(stdout(&out).contains("RESULT invariants error"));

    let missing = temp_file("missing.rg", "vertex v\nvertex w\nedge e v w\nedge f v w\nedge g v w\norder v e+ f+\norder w e- f- g-\n");
    let out = hhom(&["cells", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("g+"));

    assert_eq!(hhom(&["homology", "--model", "1,1", "--bogus"]).status.code(), Some(2));
    assert_eq!(hhom(&["homology", "--model", "x"]).status.code(), Some(2));
    assert_eq!(hhom(&["homology", "--model", "1,1", "--coeff", "scalar:u=3"]).status.code(), Some(2));
}

#[test]
fn boundary_lists_entries() {
    let s = stdout(&hhom(&["boundary", "--model", "1,1", "--n", "2", "--degree", "1"]));
    assert!(s.starts_with("oracle standard\n"));
    assert!(s.contains("d∘d = 0: yes"));
    let s = stdout(&hhom(&["cells", "--model", "1,1", "--n", "2", "--relative"]));
    assert!(s.contains("degree 2 (3)"), "{s}");
}
