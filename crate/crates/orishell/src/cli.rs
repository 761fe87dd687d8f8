//! Command-line driver. Exit codes: 0 success, 1 usage or input error,
//! 2 solver failure or failed check.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use orishell_core::assembly::Assembler;
use orishell_core::solver::run;
use orishell_core::Scene;
use rayon::prelude::*;

use crate::curves::{self, RunSummary};
use crate::runs::{self, AnnulusRow};
use crate::{check, scene_file, vtk};

#[derive(Debug, Parser)]
#[command(name = "orishell", version, about = "Quasi-static origami simulation with solid-shell panels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a scene file and write snapshots, curves and a summary.
    Simulate {
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Number of nominal load increments.
        #[arg(long)]
        increments: Option<usize>,
        /// Newton tolerance on the correction norm.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long = "max-iters")]
        max_iters: Option<usize>,
        /// Write a snapshot every this many accepted increments.
        #[arg(long)]
        snapshots: Option<usize>,
    },
    /// Run a benchmark and write its curves.
    Bench {
        kind: BenchKind,
        #[arg(long)]
        out: PathBuf,
        /// Mesh sizes, e.g. `32x4` or `32x4,64x8` (annulus: circumferential x
        /// radial per side; cantilever: along x across).
        #[arg(long, value_delimiter = ',', value_parser = parse_mesh)]
        mesh: Vec<(usize, usize)>,
        /// Folding stiffnesses relative to the panel bending rigidity.
        #[arg(long, value_delimiter = ',')]
        kf: Vec<f64>,
    },
    /// Run the finite-difference and invariance checks.
    Check {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    Miura,
    Annulus,
    Cantilever,
    All,
}

fn parse_mesh(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected NxM, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad mesh size `{s}`"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad mesh size `{s}`"))?;
    if a == 0 || b == 0 {
        return Err(format!("mesh sizes must be positive, got `{s}`"));
    }
    Ok((a, b))
}

/// Outcome of a command: the exit code and what to print.
struct Report {
    code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Simulate {
            scene,
            out,
            increments,
            tol,
            max_iters,
            snapshots,
        } => simulate(&scene, &out, increments, tol, max_iters, snapshots),
        Command::Bench { kind, out, mesh, kf } => bench(kind, &out, &mesh, &kf),
        Command::Check { samples, seed } => Ok(check_cmd(samples, seed)),
    };
    match result {
        Ok(r) => r.code,
        Err(msg) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

/// Caps the worker pool at `ORISHELL_THREADS` when set.
fn configure_threads() {
    if let Some(n) = std::env::var("ORISHELL_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // a second call (tests running commands in-process) keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn create_dir(dir: &Path) -> Result<(), String> {
    fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

/// Solves `scene` and writes `step_XXXX.vtk`, `curves.csv` and
/// `summary.json` into `dir`. Partial results are written on failure.
pub fn solve_and_write(scene: &Scene, dir: &Path) -> Result<(bool, RunSummary), String> {
    create_dir(dir)?;
    let start = Instant::now();
    let result = run(scene, &scene.solver);
    let elapsed = start.elapsed().as_secs_f64();
    let (traj, error) = match &result {
        Ok(t) => (t, None),
        Err(f) => (&f.trajectory, Some(f.to_string())),
    };
    let assembler = Assembler::new(&scene.mesh).map_err(|e| e.to_string())?;
    let every = scene.outputs.snapshot_every.max(1);
    let mut snapshots = 0;
    for (k, p) in traj.points.iter().enumerate().skip(1) {
        if k % every == 0 {
            vtk::write_snapshot(&assembler, &p.displacement, k, dir).map_err(io_err(dir))?;
            snapshots += 1;
        }
    }
    let curves_path = dir.join("curves.csv");
    curves::write_scene_curves(scene, traj, &curves_path).map_err(io_err(&curves_path))?;
    let mut summary = RunSummary::new(&scene.name, traj, error);
    summary.snapshots = snapshots;
    summary.elapsed_seconds = elapsed;
    let summary_path = dir.join("summary.json");
    summary.write(&summary_path).map_err(io_err(&summary_path))?;
    Ok((result.is_ok(), summary))
}

fn simulate(
    path: &Path,
    out: &Path,
    increments: Option<usize>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    snapshots: Option<usize>,
) -> Result<Report, String> {
    let mut scene = scene_file::parse_scene(path).map_err(|e| e.to_string())?;
    if let Some(n) = increments {
        scene.solver.max_increments = n;
    }
    if let Some(t) = tol {
        scene.solver.tolerance = Some(t);
    }
    if let Some(k) = max_iters {
        scene.solver.max_iterations = k;
    }
    if let Some(s) = snapshots {
        scene.outputs.snapshot_every = s;
    }
    scene.validate().map_err(|e| e.to_string())?;
    let (ok, summary) = solve_and_write(&scene, out)?;
    print_summary(&summary);
    Ok(Report { code: if ok { 0 } else { 2 } })
}

fn print_summary(s: &RunSummary) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(
        out,
        "{}: {} at lambda = {} after {} accepted increments ({} attempts, {} snapshots)",
        s.scene,
        if s.completed { "completed" } else { "stopped" },
        s.final_lambda,
        s.accepted_increments,
        s.attempts,
        s.snapshots
    );
    if let Some(e) = &s.error {
        let _ = writeln!(out, "  {e}");
    }
}

fn bench(kind: BenchKind, out: &Path, mesh: &[(usize, usize)], kf: &[f64]) -> Result<Report, String> {
    create_dir(out)?;
    let code = match kind {
        BenchKind::Miura => bench_miura(&out.join("miura"))?,
        BenchKind::Annulus => bench_annulus(&out.join("annulus"), mesh, kf)?,
        BenchKind::Cantilever => bench_cantilever(&out.join("cantilever"), mesh)?,
        BenchKind::All => {
            let jobs = [BenchKind::Miura, BenchKind::Annulus, BenchKind::Cantilever];
            let codes: Vec<Result<i32, String>> = jobs
                .par_iter()
                .map(|&k| match k {
                    BenchKind::Miura => bench_miura(&out.join("miura")),
                    BenchKind::Annulus => bench_annulus(&out.join("annulus"), mesh, kf),
                    _ => bench_cantilever(&out.join("cantilever"), mesh),
                })
                .collect();
            let mut worst = 0;
            for c in codes {
                worst = worst.max(c?);
            }
            worst
        }
    };
    Ok(Report { code })
}

fn bench_miura(dir: &Path) -> Result<i32, String> {
    create_dir(dir)?;
    let start = Instant::now();
    let r = runs::run_miura();
    let traj = r.trajectory();
    let assembler = Assembler::new(&r.scene.mesh).map_err(|e| e.to_string())?;
    let mut snapshots = 0;
    for (k, p) in traj.points.iter().enumerate().skip(1) {
        vtk::write_snapshot(&assembler, &p.displacement, k, dir).map_err(io_err(dir))?;
        snapshots += 1;
    }
    let rows = r.rows();
    let path = dir.join("curves.csv");
    curves::write_miura_curves(&rows, &path).map_err(io_err(&path))?;
    let worst = rows
        .iter()
        .map(|row| {
            let h = (row.height - row.height_analytic).abs() / row.height_analytic;
            let w = (row.width - row.width_analytic).abs() / row.width_analytic;
            h.max(w)
        })
        .fold(0.0f64, f64::max);
    let mut summary = RunSummary::new("miura_unit", traj, r.result.as_ref().err().map(|f| f.to_string()));
    summary.snapshots = snapshots;
    summary.elapsed_seconds = start.elapsed().as_secs_f64();
    summary.details = serde_json::json!({ "worst_relative_extent_error": worst });
    finish(dir, &summary)
}

fn finish(dir: &Path, summary: &RunSummary) -> Result<i32, String> {
    let path = dir.join("summary.json");
    summary.write(&path).map_err(io_err(&path))?;
    print_summary(summary);
    Ok(if summary.completed { 0 } else { 2 })
}

fn bench_annulus(dir: &Path, mesh: &[(usize, usize)], kf: &[f64]) -> Result<i32, String> {
    create_dir(dir)?;
    let meshes: Vec<(usize, usize)> = if mesh.is_empty() {
        runs::ANNULUS_MESHES.to_vec()
    } else {
        mesh.to_vec()
    };
    let kfs: Vec<f64> = if kf.is_empty() {
        runs::ANNULUS_STIFFNESSES.to_vec()
    } else {
        kf.to_vec()
    };
    if let Some(bad) = kfs.iter().find(|k| !(**k >= 0.0 && k.is_finite())) {
        return Err(format!("k_f must be finite and non-negative, got {bad}"));
    }
    let cases: Vec<(usize, usize, f64)> = meshes
        .iter()
        .flat_map(|&(n, m)| kfs.iter().map(move |&k| (n, m, k)))
        .collect();
    let start = Instant::now();
    let results: Vec<Result<AnnulusRow, String>> = cases
        .par_iter()
        .map(|&(n, m, k)| runs::run_annulus(n, m, k).map_err(|f| format!("{n}x{m} k_f={k}: {f}")))
        .collect();
    let rows: Vec<AnnulusRow> = results.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    let failures: Vec<String> = results.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
    let path = dir.join("curves.csv");
    curves::write_annulus_curves(&rows, &path).map_err(io_err(&path))?;
    let completed = failures.is_empty();
    let summary = RunSummary {
        scene: "annulus_sector".into(),
        completed,
        error: (!completed).then(|| failures.join("; ")),
        final_lambda: if completed { 1.0 } else { 0.0 },
        accepted_increments: 0,
        attempts: 0,
        rejected_attempts: 0,
        total_iterations: 0,
        snapshots: 0,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        details: serde_json::json!({
            "side": format!("{:?}", runs::MEASURED_SIDE).to_lowercase(),
            "runs": rows.iter().map(|r| serde_json::json!({
                "mesh": r.mesh_label(),
                "k_f": r.k_f,
                "E_bend": r.bending,
                "E_bend_without_crease_row": r.bending_without_crease_row,
                "E_theory": r.theory,
                "rel_error": r.rel_error(),
            })).collect::<Vec<_>>(),
        }),
    };
    finish(dir, &summary)
}

fn bench_cantilever(dir: &Path, mesh: &[(usize, usize)]) -> Result<i32, String> {
    create_dir(dir)?;
    let (nx, ny) = mesh.first().copied().unwrap_or((10, 1));
    let start = Instant::now();
    let r = runs::run_cantilever(nx, ny);
    let traj = r.trajectory();
    let assembler = Assembler::new(&r.scene.mesh).map_err(|e| e.to_string())?;
    let mut snapshots = 0;
    for (k, p) in traj.points.iter().enumerate().skip(1) {
        vtk::write_snapshot(&assembler, &p.displacement, k, dir).map_err(io_err(dir))?;
        snapshots += 1;
    }
    let path = dir.join("curves.csv");
    curves::write_cantilever_curves(&r.rows(), &path).map_err(io_err(&path))?;
    let mut summary = RunSummary::new("cantilever", traj, r.result.as_ref().err().map(|f| f.to_string()));
    summary.snapshots = snapshots;
    summary.elapsed_seconds = start.elapsed().as_secs_f64();
    summary.details = serde_json::json!({ "mesh": format!("{nx}x{ny}") });
    finish(dir, &summary)
}

fn check_cmd(samples: usize, seed: u64) -> Report {
    let lines = check::run_suite(samples, seed);
    let mut out = std::io::stdout().lock();
    for l in &lines {
        let _ = writeln!(
            out,
            "{} {:<26} worst {:.3e} (tolerance {:.0e})",
            if l.passed() { "PASS" } else { "FAIL" },
            l.name,
            l.worst,
            l.tolerance
        );
    }
    Report {
        code: if lines.iter().all(|l| l.passed()) { 0 } else { 2 },
    }
}
