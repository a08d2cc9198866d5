use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifs-hull"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn levy() -> String {
    data("levy.ifs").display().to_string()
}

#[test]
fn levy_hull_starts_at_principal_vertex() {
    let out = run(&["hull", &levy()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "armadillo");
    assert_eq!(v["verified"], true);
    let ext = v["extrema"].as_array().unwrap();
    assert_eq!(ext.len(), 8);
    assert!((ext[0]["re"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!((ext[0]["im"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(ext[0]["form"]["x"], "21");
    assert_eq!(ext[0]["form"]["b"], "");
}

#[test]
fn levy_hull_csv() {
    let out = run(&["hull", &levy(), "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    let first: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(first.len(), 4);
    assert!((first[0].parse::<f64>().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(first[3], "21");

    let long = run(&["hull", &levy(), "--csv", "--long-form"]);
    let text = String::from_utf8(long.stdout).unwrap();
    assert!(text.lines().next().unwrap().ends_with("\"2,1\""));
}

#[test]
fn twindragon_contains_principal_point() {
    let out = run(&["hull", data("twindragon.ifs").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let hit = v["extrema"].as_array().unwrap().iter().any(|e| {
        (e["re"].as_f64().unwrap() - 2.0).abs() < 1e-6
            && (e["im"].as_f64().unwrap() + 0.666667).abs() < 1e-6
    });
    assert!(hit, "{v}");
    assert_eq!(v["principal"]["form"]["x"], "2111");
}

#[test]
fn sierpinski_hull_is_its_fixed_points() {
    let out = run(&["hull", data("sierpinski.ifs").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["method"], "equiangular");
    let ext = v["extrema"].as_array().unwrap();
    assert_eq!(ext.len(), 3);
    let h = 3f64.sqrt() / 2.0;
    for (re, im) in [(0.0, 0.0), (1.0, 0.0), (0.5, h)] {
        assert!(ext.iter().any(|e| {
            (e["re"].as_f64().unwrap() - re).abs() < 1e-9
                && (e["im"].as_f64().unwrap() - im).abs() < 1e-9
        }));
    }
}

#[test]
fn method_override_and_target() {
    let out = run(&["hull", &levy(), "--method", "general"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "general");

    let out = run(&["hull", &levy(), "--target", "0.2194,-0.566"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["extrema"].as_array().unwrap().len(), 8);
}

#[test]
fn maximize_levy() {
    let out = run(&["maximize", &levy(), "--target", "0.2194,-0.566"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let m = v["maximizers"].as_array().unwrap();
    assert_eq!(m.len(), 1);
    assert_eq!(m[0]["form"]["x"], "21");
    assert!((m[0]["re"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn zero_target_is_rejected() {
    let out = run(&["maximize", &levy(), "--target", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonzero"));
}

#[test]
fn render_writes_one_hull_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levy.svg");
    let out = run(&[
        "render",
        &levy(),
        "--level",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let svg = std::fs::read_to_string(&path).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let polys: Vec<_> = doc
        .descendants()
        .filter(|n| n.has_tag_name("polygon"))
        .collect();
    assert_eq!(polys.len(), 1);
    assert_eq!(
        polys[0]
            .attribute("points")
            .unwrap()
            .split_whitespace()
            .count(),
        8
    );
}

#[test]
fn info_reports_angle_data() {
    let out = run(&["info", &levy()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["maps"], 2);
    assert_eq!(v["common_denominator"], 8);
    assert_eq!(v["value_set_cardinality"], 8);
    assert_eq!(v["class"]["c_ifs"], true);
    assert_eq!(v["termination_bound"], 16);
}

#[test]
fn bad_input_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ifs");
    std::fs::write(&bad, "map 0 0 1.5 1/3\n").unwrap();
    let out = run(&["hull", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));

    let out = run(&["hull", dir.path().join("missing.ifs").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["hull", &levy(), "--method", "bogus"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn unverified_heuristic_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("wide.ifs");
    // Predicted plates miss part of this attractor.
    std::fs::write(&path, "map 0 0 0.474 -1/10\nmap 1 0 0.864 4/10\n").unwrap();
    let out = run(&["hull", path.to_str().unwrap(), "--method", "heuristic"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["method"], "heuristic-only");
    assert_eq!(v["verified"], false);

    let out = run(&["hull", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verified"], true);
}
