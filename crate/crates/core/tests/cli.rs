use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framecurve")).current_dir(dir).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

const BUTTERFLY: &str = r#"{
  "curve": {"kind": "curvature", "kappa": [["1"], [], [["0", "-1"], [], ["1"]]]},
  "grids": {"t": {"min": -1, "max": 1, "count": 100}, "lambda": {"min": -0.1, "max": 0.1, "count": 21}}
}"#;

#[test]
fn normal_form_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["normal-form", "--type", "1,2,3", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let obj = fs::read_to_string(dir.path().join("o/mesh.obj")).unwrap();
    let lines: Vec<&str> = obj.lines().collect();
    let i = lines.iter().position(|l| *l == "# param 1.00000000000000000e0 0.00000000000000000e0").unwrap();
    let v: Vec<f64> = lines[i - 1].split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
    assert!(v[0].abs() < 1e-15 && (v[1] + 0.5).abs() < 1e-15 && (v[2] - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn enumerate_adapted_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["enumerate", "--n", "2", "--budget", "2", "--mode", "adapted", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("o/enumeration.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[4].starts_with("\"(2,3,4)\""));
}

#[test]
fn invalid_config_exits_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.json", r#"{"geometry": "euclidean", "unknown": 1}"#);
    let out = run(dir.path(), &["scan", "--config", "bad.json", "--out", "o"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("o/report.json").exists());
    assert_eq!(run(dir.path(), &["scan", "--config", "missing.json", "--out", "o"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["normal-form", "--type", "1,1,2", "--out", "o"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["bogus"]).status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // a planar circle never reaches full rank
    write(dir.path(), "c.json", r#"{"curve": {"kind": "closed-form", "id": "unit-circle"}}"#);
    assert_eq!(run(dir.path(), &["type", "--config", "c.json", "--out", "o"]).status.code(), Some(3));
}

#[test]
fn scan_is_deterministic_and_replayable() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "b.json", BUTTERFLY);
    assert_eq!(run(dir.path(), &["scan", "--config", "b.json", "--out", "a"]).status.code(), Some(0));
    assert_eq!(run(dir.path(), &["scan", "--config", "b.json", "--out", "b"]).status.code(), Some(0));
    let read = |p: &str| fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a/events.csv"), read("b/events.csv"));
    assert_eq!(read("a/report.json"), read("b/report.json"));
    // the report embeds the resolved config and can be fed back in
    assert_eq!(run(dir.path(), &["scan", "--config", "a/report.json", "--out", "c"]).status.code(), Some(0));
    assert_eq!(read("a/events.csv"), read("c/events.csv"));
    assert_eq!(read("a/report.json"), read("c/report.json"));

    let r = report(&dir.path().join("a"));
    let codim2: Vec<&Value> =
        r["events"].as_array().unwrap().iter().filter(|e| e["kind"] == "momentary" && e["codim_C"] == 2).collect();
    assert_eq!(codim2.len(), 1);
    assert!(codim2[0]["t"].as_f64().unwrap().abs() < 1e-4 && codim2[0]["lambda"].as_f64().unwrap().abs() < 1e-4);
    assert_eq!(r["tolerances"]["rank_tol"], 1e-8);
    assert_eq!(r["arithmetic"], "mixed");
}

#[test]
fn scan_without_events_reports_empty_list() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "f.json",
        r#"{"curve": {"kind": "curvature", "kappa": [["1"], [], ["1"]]},
            "grids": {"t": {"min": -1, "max": 1, "count": 20}, "lambda": {"min": 0, "max": 1, "count": 3}}}"#,
    );
    assert_eq!(run(dir.path(), &["scan", "--config", "f.json", "--out", "o"]).status.code(), Some(0));
    let r = report(&dir.path().join("o"));
    assert_eq!(r["events"].as_array().unwrap().len(), 0);
    assert_eq!(r["grids"]["t"]["count"], 20);
}

#[test]
fn envelope_writes_mesh_and_locus() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "h.json",
        r#"{"curve": {"kind": "closed-form", "id": "helix"},
            "grids": {"t": {"min": -1, "max": 1, "count": 20}, "s": {"min": -1, "max": 1, "count": 5}},
            "outputs": {"mesh": "helix.obj"}}"#,
    );
    assert_eq!(run(dir.path(), &["envelope", "--config", "h.json", "--out", "o", "--threads", "1"]).status.code(), Some(0));
    let obj = fs::read_to_string(dir.path().join("o/helix.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 100);
    assert!(dir.path().join("o/locus.obj").exists());
    let r = report(&dir.path().join("o"));
    assert!(r["residuals"]["incidence"].as_f64().unwrap() < 1e-12);
}

#[test]
fn type_reports_codimensions() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "p.json",
        r#"{"curve": {"kind": "polynomial", "components": [["1"], ["0", "1"], ["0", "0", "1/2"], ["0", "0", "0", "0", "1/24"]]}}"#,
    );
    let out = run(dir.path(), &["type", "--config", "p.json", "--t", "0", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("curve (1,2,4) schubert 1 codim_D 1 codim_C 1 dual (2,3,4)"));
    let r = report(&dir.path().join("o"));
    assert_eq!(r["arithmetic"], "exact");
    assert_eq!(r["results"]["curve"]["dual_type"], serde_json::json!([2, 3, 4]));
}

#[test]
fn verify_single_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--criterion", "3", "--out", "o"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("PASS [3]"));
    assert_eq!(run(dir.path(), &["verify", "--criterion", "99", "--out", "o"]).status.code(), Some(2));
}
