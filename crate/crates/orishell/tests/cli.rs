use std::fs;
use std::path::Path;
use std::process::Command;

fn orishell(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_orishell"))
        .args(args)
        .env("ORISHELL_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn bench_miura_writes_curves_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = orishell(&["bench", "miura", "--out", out]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let m = dir.path().join("miura");
    let rows = csv_rows(&m.join("curves.csv"));
    assert!(rows.len() > 100);
    let snaps = fs::read_dir(&m).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "vtk")).count();
    assert_eq!(snaps, rows.len() - 1);
    assert!(m.join("step_0001.vtk").exists());
    let last = rows.last().unwrap();
    let v: Vec<f64> = last.iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(v[0], 1.0);
    assert!((v[2] - v[4]).abs() < 0.01 * v[4] && (v[3] - v[5]).abs() < 0.01 * v[5]);
    // lambda strictly increasing
    let lambdas: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(lambdas.windows(2).all(|w| w[0] < w[1]));

    // identical arguments give identical curves
    let dir2 = tempfile::tempdir().unwrap();
    orishell(&["bench", "miura", "--out", dir2.path().to_str().unwrap()]);
    assert_eq!(
        fs::read(m.join("curves.csv")).unwrap(),
        fs::read(dir2.path().join("miura/curves.csv")).unwrap()
    );
}

#[test]
fn bench_annulus_single_case() {
    let dir = tempfile::tempdir().unwrap();
    let run = orishell(&["bench", "annulus", "--out", dir.path().to_str().unwrap(), "--mesh", "32x4", "--kf", "1"]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let rows = csv_rows(&dir.path().join("annulus/curves.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "32x4");
    assert_eq!(rows[0][1], "1");
    let err: f64 = rows[0][4].parse().unwrap();
    assert!(err.abs() < 0.05, "{err}");
}

#[test]
fn bench_cantilever_tracks_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let run = orishell(&["bench", "cantilever", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(0));
    let rows = csv_rows(&dir.path().join("cantilever/curves.csv"));
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[10][0], "4000");
}

#[test]
fn simulate_shipped_scene() {
    let dir = tempfile::tempdir().unwrap();
    let scene = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes/miura_unit.scene");
    let out = dir.path().join("run");
    let run = orishell(&[
        "simulate",
        scene.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--increments",
        "40",
        "--snapshots",
        "5",
    ]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["completed"], true);
    let accepted = summary["accepted_increments"].as_u64().unwrap() as usize;
    assert_eq!(summary["snapshots"].as_u64().unwrap() as usize, accepted / 5);
    let rows = csv_rows(&out.join("curves.csv"));
    assert_eq!(rows.len(), accepted + 1);
    assert!(out.join("step_0005.vtk").exists());
}

#[test]
fn solver_failure_exits_two_and_keeps_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    // an unsupported quad: every tangent is singular
    let scene = dir.path().join("free.scene");
    fs::write(
        &scene,
        r#"{
            "name": "free_quad",
            "nodes": [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
            "elements": [{ "nodes": [0, 1, 2, 3] }],
            "material": { "E": 1e6, "nu": 0.3, "h": 0.01 },
            "forces": [{ "node": 2, "dof": "w", "value": 1.0 }],
            "solver": { "max_increments": 4, "max_iterations": 10, "max_recoveries": 5 }
        }"#,
    )
    .unwrap();
    let out = dir.path().join("run");
    let run = orishell(&["simulate", scene.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["completed"], false);
    assert_eq!(summary["attempts"], 6);
    assert!(summary["error"].as_str().unwrap().contains("recovery attempts exhausted"));
    let text = fs::read_to_string(out.join("curves.csv")).unwrap();
    assert!(text.starts_with("lambda,energy,crease_energy,iterations,residual\n"));
    assert!(!text.contains("NaN") && !text.contains("inf"));
}

#[test]
fn usage_and_missing_files_exit_one() {
    let run = orishell(&["simulate", "missing.scene", "--out", "/tmp/never"]);
    assert_eq!(run.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&run.stderr).contains("file not found"));
    assert_eq!(orishell(&["bench", "teapot", "--out", "x"]).status.code(), Some(1));
    assert_eq!(orishell(&[]).status.code(), Some(1));
}

#[test]
fn check_command_passes() {
    let run = orishell(&["check", "--samples", "20"]);
    assert_eq!(run.status.code(), Some(0));
    let text = String::from_utf8_lossy(&run.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7);
}
