//! End-to-end runs of the `nv` binary: exit codes, written files, determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn nv(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nv"));
    cmd.current_dir(dir).args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// Writes `config.json` into a fresh directory; outputs land in `<dir>/out`.
fn setup(json: &str) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("config.json");
    fs::write(&path, json).unwrap();
    (dir, path)
}

fn run(cmd: &str, json: &str) -> (TempDir, Output) {
    let (dir, path) = setup(json);
    let out = nv(dir.path(), &[cmd, "--config", path.to_str().unwrap()], &[]);
    (dir, out)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_exit_codes() {
    let (_d, ok) = run("check", r#"{"radius": 3, "interior": [{"x": 0, "y": 0, "n": 2}]}"#);
    assert_eq!(code(&ok), 0);
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["margin"], 0.25);
    assert_eq!(v["admissible"], true);

    let (_d, bad) = run("check", r#"{"radius": 3, "interior": [{"x": 0, "y": 0, "n": 3}]}"#);
    assert_eq!(code(&bad), 2);
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["margin"], -0.75);

    let (_d, half) = run("check", r#"{"radius": 3, "interior": [{"x": 0, "y": 0, "n": 2}], "boundary": [{"theta": 0.5}]}"#);
    assert_eq!(code(&half), 2, "margin exactly zero is refused");

    let (_d, missing) = run("check", r#"{"interior": [{"x": 0, "y": 0}]}"#);
    assert_eq!(code(&missing), 1);
    assert!(!missing.stderr.is_empty());
}

#[test]
fn argument_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&nv(dir.path(), &["check"], &[])), 1);
    assert_eq!(code(&nv(dir.path(), &["check", "--bogus"], &[])), 1);
    assert_eq!(code(&nv(dir.path(), &["frobnicate"], &[])), 1);
    assert_eq!(code(&nv(dir.path(), &["check", "--config", "absent.json"], &[])), 1);
    assert_eq!(code(&nv(dir.path(), &["--help"], &[])), 0);
}

#[test]
fn solve_radial_writes_profile_and_report() {
    let (dir, out) = run("solve-radial", r#"{"radius": 3, "interior": [{"x": 0, "y": 0}], "shooting": {"csv_rows": 101}}"#);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("out/report.json"));
    assert_eq!(report["converged"], true);
    assert!((report["boundary_slope"].as_f64().unwrap() + 2.0 / 3.0).abs() <= 1e-6);
    let csv = fs::read_to_string(dir.path().join("out/profile.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("r,"));
    assert_eq!(lines.count(), 101);
}

#[test]
fn solve_radial_failures() {
    let (_d, out) = run("solve-radial", r#"{"radius": 1, "interior": [{"x": 0, "y": 0}]}"#);
    assert_eq!(code(&out), 2);
    let (_d, out) = run(
        "solve-radial",
        r#"{"radius": 3, "interior": [{"x": 0, "y": 0}], "shooting": {"scan_lo": 0.0, "scan_hi": 5.0}}"#,
    );
    assert_eq!(code(&out), 3, "no sign change above h0 = 0");
    let (_d, out) = run("solve-radial", r#"{"radius": 3, "interior": [{"x": 1, "y": 0}]}"#);
    assert_eq!(code(&out), 1);
}

#[test]
fn solve_2d_writes_field_and_report() {
    let (dir, out) = run(
        "solve-2d",
        r#"{"radius": 3, "boundary": [{"theta": 0}], "grid": {"nr": 32, "ntheta": 48}}"#,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_json(&dir.path().join("out/report.json"));
    assert_eq!(report["converged"], true);
    let flux = report["flux"].as_f64().unwrap();
    assert!((flux / std::f64::consts::PI - 1.0).abs() < 1e-6);
    let columns: Vec<String> = serde_json::from_value(report["field_columns"].clone()).unwrap();

    let csv = fs::read_to_string(dir.path().join("out/field.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, columns);
    assert_eq!(lines.clone().count(), 32 * 48);
    for line in lines {
        assert_eq!(line.split(',').count(), header.len());
        assert!(line.split(',').all(|x| x.parse::<f64>().is_ok()));
    }
    assert!(fs::read_dir(dir.path().join("out"))
        .unwrap()
        .all(|e| !e.unwrap().file_name().to_string_lossy().ends_with(".partial")));
}

#[test]
fn solve_2d_respects_formats_and_overrides() {
    let (dir, path) = setup(r#"{"radius": 3, "interior": [{"x": 0.5, "y": 0}], "outputs": {"formats": ["json"]}}"#);
    let out = nv(
        dir.path(),
        &["solve-2d", "--config", path.to_str().unwrap(), "--nr", "24", "--ntheta", "32", "--out", "elsewhere"],
        &[],
    );
    assert_eq!(code(&out), 0);
    let report = read_json(&dir.path().join("elsewhere/report.json"));
    assert_eq!(report["grid"]["nr"], 24);
    assert_eq!(report["grid"]["ntheta"], 32);
    assert!(!dir.path().join("elsewhere/field.csv").exists());
    assert!(!dir.path().join("out").exists());
}

#[test]
fn newton_exhaustion_exits_four_with_report() {
    let (dir, out) = run(
        "solve-2d",
        r#"{"radius": 3, "interior": [{"x": 0, "y": 0}], "grid": {"nr": 16, "ntheta": 16}, "solver": {"max_iter": 1}}"#,
    );
    assert_eq!(code(&out), 4);
    let report = read_json(&dir.path().join("out/report.json"));
    assert_eq!(report["converged"], false);
    assert!(!dir.path().join("out/field.csv").exists());
}

#[test]
fn solve_2d_is_deterministic_across_thread_counts() {
    let json = r#"{"radius": 3, "interior": [{"x": 1, "y": 0.5}], "boundary": [{"theta": 2}], "grid": {"nr": 32, "ntheta": 32}}"#;
    let (dir, path) = setup(json);
    let p = path.to_str().unwrap();
    let a = nv(dir.path(), &["solve-2d", "--config", p, "--out", "a"], &[("NV_THREADS", "1")]);
    let b = nv(dir.path(), &["solve-2d", "--config", p, "--out", "b"], &[("NV_THREADS", "4")]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    for f in ["report.json", "field.csv"] {
        let x = fs::read(dir.path().join("a").join(f)).unwrap();
        let y = fs::read(dir.path().join("b").join(f)).unwrap();
        assert!(x == y, "{f} differs between runs");
    }
}

#[test]
fn metric_reports_boundary_value() {
    let (dir, out) = run("metric", r#"{"radius": 3, "interior": [{"x": 0, "y": 0}], "grid": {"nr": 64, "ntheta": 64}}"#);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let m = read_json(&dir.path().join("out/metric.json"));
    let bv = m["boundary_value"].as_f64().unwrap();
    assert!(bv.abs() > 1e-2);
    let term = m["boundary_term"].as_f64().unwrap();
    assert!((term - 0.5 * std::f64::consts::PI * bv * bv).abs() < 1e-12);
    assert!(m["samols_b"].is_array() || m["samols_b"].is_object());

    let (_d, off) = run("metric", r#"{"radius": 3, "interior": [{"x": 1, "y": 0}]}"#);
    assert_eq!(code(&off), 1);
    let (_d, weak) = run("metric", r#"{"radius": 1, "interior": [{"x": 0, "y": 0}]}"#);
    assert_eq!(code(&weak), 2);
}

#[test]
fn verify_gate_only_for_inadmissible_config() {
    let (dir, out) = run("verify", r#"{"radius": 3, "interior": [{"x": 0, "y": 0, "n": 3}]}"#);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS [4]"), "{text}");
    let report = read_json(&dir.path().join("out/report.json"));
    assert_eq!(report["checks"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_coarse_grid_passes() {
    let (dir, out) = run("verify", r#"{"radius": 3, "interior": [{"x": 0, "y": 0}], "grid": {"nr": 64, "ntheta": 64}}"#);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS [")).count(), 10, "{text}");
    let report = read_json(&dir.path().join("out/report.json"));
    assert_eq!(report["passed"], true);
}

#[test]
fn metric_is_deterministic_across_thread_counts() {
    let (dir, path) = setup(r#"{"radius": 3, "interior": [{"x": 0, "y": 0}], "grid": {"nr": 32, "ntheta": 32}}"#);
    let p = path.to_str().unwrap();
    let a = nv(dir.path(), &["metric", "--config", p, "--out", "a"], &[("NV_THREADS", "1")]);
    let b = nv(dir.path(), &["metric", "--config", p, "--out", "b"], &[]);
    assert_eq!((code(&a), code(&b)), (0, 0));
    let x = fs::read(dir.path().join("a/metric.json")).unwrap();
    let y = fs::read(dir.path().join("b/metric.json")).unwrap();
    assert!(x == y, "metric.json differs between runs");
}
