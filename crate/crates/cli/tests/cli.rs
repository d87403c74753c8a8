use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const VSR: &str = env!("CARGO_BIN_EXE_vsr");

fn vsr(args: &[&str]) -> Output {
    Command::new(VSR).args(args).output().expect("vsr runs")
}

fn ok(args: &[&str]) -> String {
    let out = vsr(args);
    assert!(
        out.status.success(),
        "vsr {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn parallel_edges(dir: &Path) -> PathBuf {
    let path = dir.join("parallel.json");
    fs::write(
        &path,
        r#"{"format": 1, "kind": "shortest_path", "nodes": 2, "directed": true,
            "arcs": [{"tail": 0, "head": 1, "cost": 4}, {"tail": 0, "head": 1, "cost": 5}],
            "s": 0, "t": 1}"#,
    )
    .unwrap();
    path
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn generate_writes_seeded_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inst");
    let o = out.to_str().unwrap();
    ok(&["generate", "--family", "layered", "--layers", "5", "--width", "5", "--count", "3", "--seed", "9", "--out-dir", o]);
    let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 3);
    for f in &files {
        let doc = read_json(f);
        assert_eq!(doc["nodes"], 32);
        assert_eq!(doc["arcs"].as_array().unwrap().len(), 135);
    }
    let again = dir.path().join("again");
    ok(&["generate", "--family", "layered", "--layers", "5", "--width", "5", "--count", "3", "--seed", "9", "--out-dir", again.to_str().unwrap()]);
    for f in &files {
        let name = f.file_name().unwrap();
        assert_eq!(fs::read(f).unwrap(), fs::read(again.join(name)).unwrap());
    }
}

#[test]
fn generate_zero_count_and_bad_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("none");
    ok(&["generate", "--family", "two-path", "--length", "50", "--density", "0.05", "--count", "0", "--out-dir", out.to_str().unwrap()]);
    assert!(!out.exists());
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let bad = blocker.join("sub");
    let o = vsr(&["generate", "--family", "two-path", "--length", "50", "--density", "0.05", "--count", "1", "--out-dir", bad.to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn solve_parallel_edges() {
    let dir = tempfile::tempdir().unwrap();
    let inst = parallel_edges(dir.path());
    let report = dir.path().join("r.json");
    for backend in ["enum", "highs"] {
        ok(&["solve", inst.to_str().unwrap(), "--backend", backend, "--report", report.to_str().unwrap()]);
        let r = read_json(&report);
        assert!((r["val"].as_f64().unwrap() - 32.0 / 9.0).abs() < 1e-9);
        assert_eq!(r["x"], "10");
        let cps = r["changepoints"].as_array().unwrap();
        assert_eq!(cps.len(), 1);
        assert!((cps[0].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-9);
    }
    ok(&["solve", inst.to_str().unwrap(), "--mode", "regret", "--lambda", "0", "--backend", "enum", "--report", report.to_str().unwrap()]);
    let r = read_json(&report);
    assert_eq!((r["x"].as_str(), r["regret"].as_f64()), (Some("10"), Some(0.0)));
    ok(&["solve", inst.to_str().unwrap(), "--mode", "compromise-minmax", "--report", report.to_str().unwrap()]);
    let r = read_json(&report);
    assert_eq!(r["x"], "10");
    assert!((r["objective"].as_f64().unwrap() - 6.0).abs() < 1e-12);
}

#[test]
fn solve_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = parallel_edges(dir.path());
    let o = vsr(&["solve", inst.to_str().unwrap(), "--mode", "regret", "--lambda", "1.5"]);
    assert!(!o.status.success());
    let o = vsr(&["solve", dir.path().join("missing.json").to_str().unwrap()]);
    assert!(!o.status.success());
}

#[test]
fn curve_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let inst = parallel_edges(dir.path());
    let out = ok(&[
        "curve", inst.to_str().unwrap(), "--solution", "e0=10", "--solution", "e1=01", "--grid", "11", "--backend", "enum",
    ]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(
        header,
        ["lambda", "regret_compromise", "regret_e0", "regret_e1", "diff_compromise", "diff_e0", "diff_e1"]
    );
    assert_eq!(rows.len(), 11);
    for row in &rows {
        let v: Vec<f64> = row.iter().map(|s| s.parse().unwrap()).collect();
        let l = v[0];
        assert!((v[2] - (9.0 * l - 1.0).max(0.0)).abs() < 1e-12);
        assert!((v[3] - (9.0 * l + 1.0)).abs() < 1e-12);
        assert_eq!(v[4], 0.0);
        assert_eq!(v[5], 0.0);
    }
    assert!(!out.contains('\r'));
}

#[test]
fn curve_rejects_infeasible_solution() {
    let dir = tempfile::tempdir().unwrap();
    let inst = parallel_edges(dir.path());
    let o = vsr(&["curve", inst.to_str().unwrap(), "--no-compromise", "--solution", "both=11"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("both"));
}

#[test]
fn external_backend_through_lp_solve() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inst");
    ok(&["generate", "--family", "layered", "--layers", "2", "--width", "3", "--count", "2", "--seed", "4", "--out-dir", out.to_str().unwrap()]);
    let cmd = format!("'{VSR}' lp-solve {{model}} {{solution}}");
    for entry in fs::read_dir(&out).unwrap() {
        let inst = entry.unwrap().path();
        let mut vals = Vec::new();
        for (backend, formulation) in [("enum", "general"), ("external", "general"), ("external", "dual-sp")] {
            let report = dir.path().join(format!("{backend}-{formulation}.json"));
            ok(&[
                "solve", inst.to_str().unwrap(), "--backend", backend, "--solver-cmd", &cmd, "--formulation", formulation,
                "--report", report.to_str().unwrap(),
            ]);
            vals.push(read_json(&report)["val"].as_f64().unwrap());
        }
        assert!(vals.iter().all(|v| (v - vals[0]).abs() < 1e-6 * (1.0 + vals[0])), "{vals:?}");
    }
}

#[test]
fn experiment1_empty_grid_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().to_str().unwrap();
    ok(&["experiment1", "--layers", "", "--lengths", "", "--out-dir", o]);
    let text = fs::read_to_string(dir.path().join("experiment1_instances.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("instance_id,family,"));
    assert!(dir.path().join("manifest.json").exists());
}

#[test]
fn experiment1_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        ok(&[
            "experiment1", "--layers", "2,3", "--widths", "3", "--costs", "A", "--lengths", "", "--per-cell", "3",
            "--seed", "5", "--jobs", "2", "--no-timings", "--backend", "highs", "--out-dir", out.to_str().unwrap(),
        ]);
        (
            fs::read_to_string(out.join("experiment1_instances.csv")).unwrap(),
            fs::read_to_string(out.join("experiment1_summary.csv")).unwrap(),
        )
    };
    let first = run("a");
    assert_eq!(first, run("b"));
    let (header, rows) = csv_rows(&first.0);
    assert_eq!(rows.len(), 6);
    let status = header.iter().position(|h| h == "status").unwrap();
    assert!(rows.iter().all(|r| r[status] == "ok" && r.len() == header.len()));
    let manifest = read_json(&dir.path().join("a").join("manifest.json"));
    assert_eq!(manifest["instances"]["seeds"].as_array().unwrap().len(), 6);
}

#[test]
fn experiment2_reports_dominance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    ok(&[
        "experiment2", "--layers", "3", "--widths", "3", "--costs", "B", "--lengths", "", "--per-cell", "2", "--curve-grid",
        "11", "--out-dir", out.to_str().unwrap(),
    ]);
    let (header, rows) = csv_rows(&fs::read_to_string(out.join("experiment2_solutions.csv")).unwrap());
    assert_eq!(rows.len(), 2 * 6);
    let dom = header.iter().position(|h| h == "compromise_val_not_larger").unwrap();
    assert!(rows.iter().filter(|r| !r[dom].is_empty()).all(|r| r[dom] == "true"));
    let (_, curve) = csv_rows(&fs::read_to_string(out.join("experiment2_curves.csv")).unwrap());
    assert_eq!(curve.len(), 11);
    assert_eq!(read_json(&out.join("manifest.json"))["dominance_violations"], Value::Array(vec![]));
}
