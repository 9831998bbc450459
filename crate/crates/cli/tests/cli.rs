use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn webcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_webcurv")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("json report");
    assert_eq!(v["schema_version"], 1);
    v
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn dual_of_f4_is_flat_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let f4 = path(dir.path(), "f4.web");
    let leg = path(dir.path(), "leg_f4.web");
    assert!(webcurv(&["catalog", "emit", "F4", "--out", &f4]).status.success());
    assert!(webcurv(&["legendre", "--web", &f4, "--out", &leg]).status.success());
    let text = std::fs::read_to_string(&leg).unwrap();
    assert!(text.contains("F = "));
    let v = json(&webcurv(&["flatness", "--web", &leg, "--samples", "200", "--seed", "7"]));
    assert_eq!(v["result"]["verdict"], "flat");
    assert_eq!(v["result"]["admissible_count"], 200);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 200);
}

#[test]
fn table1_matches() {
    let out = webcurv(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["match"], true);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r["radial"] == r["expected_radial"]));
}

#[test]
fn foliation_reports() {
    let v = json(&webcurv(&["census", "--catalog", "F3"]));
    assert_eq!(v["result"]["total"], 7);
    assert_eq!(v["result"]["weighted"], 10);
    let v = json(&webcurv(&["convexity", "--catalog", "H4"]));
    assert_eq!(v["result"]["convex"], true);
    assert_eq!(v["result"]["line_count"], 12);
    let v = json(&webcurv(&["lines", "--catalog", "F2"]));
    assert_eq!(v["result"]["count"], 6);
    let v = json(&webcurv(&["inflection", "--catalog", "H5"]));
    assert_eq!(v["result"]["degree"], 15);
    let v = json(&webcurv(&["singularities", "--catalog", "F3"]));
    assert_eq!(v["result"]["count"], 13);
}

#[test]
fn web_reports() {
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "w.web");
    std::fs::write(&w, "# two-web times a foliation\nF = (p^2 - y)*(p - x - 1)\n").unwrap();
    let v = json(&webcurv(&["discriminant", "--web", &w]));
    assert_eq!(v["result"]["projective_degree"], v["result"]["expected_degree"]);
    let v = json(&webcurv(&["delta-report", "--web", &w]));
    assert!(!v["result"]["components"].as_array().unwrap().is_empty());
    let v = json(&webcurv(&["discriminant", "--web", &w, "--chart", "0"]));
    assert_eq!(v["input"]["chart"], 0);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = path(dir.path(), "cusp.svg");
    assert!(webcurv(&["render", "--poly", "y^2 - x^3", "--out", &svg]).status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("viewBox=\"0 0 800 800\""));
    assert!(text.contains("<path d=\"M"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.json"), path(dir.path(), "b.json"));
    for out in [&a, &b] {
        assert!(webcurv(&["flatness", "--catalog", "F3", "--samples", "30", "--seed", "3", "--out", out]).status.success());
    }
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(webcurv(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(webcurv(&["census"]).status.code(), Some(2));
    assert_eq!(webcurv(&["census", "--catalog", "nope"]).status.code(), Some(2));
    assert_eq!(webcurv(&["render", "--poly", "x +* y"]).status.code(), Some(2));
    assert_eq!(webcurv(&["census", "--web", "/nonexistent/file.web"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let w = path(dir.path(), "c.web");
    std::fs::write(&w, "ring = complex\nF = p^2 - x\n").unwrap();
    // exact discriminants need an exact ring
    assert_eq!(webcurv(&["discriminant", "--web", &w]).status.code(), Some(1));
}
