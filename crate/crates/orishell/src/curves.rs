//! CSV curve tables and the JSON run summary.

use std::fs::File;
use std::io;
use std::path::Path;

use orishell_core::{Scene, Trajectory};
use serde::Serialize;

use crate::runs::{AnnulusRow, CantileverRow, MiuraRow};

pub const MIURA_HEADER: [&str; 6] = ["lambda", "L/L_flat", "H", "W", "H_analytic", "W_analytic"];
pub const ANNULUS_HEADER: [&str; 5] = ["mesh_density", "k_f", "E_bend", "E_theory", "rel_error"];
pub const CANTILEVER_HEADER: [&str; 5] = ["P", "u_tip", "w_tip", "u_oracle", "w_oracle"];

fn num(v: f64) -> String {
    format!("{v}")
}

fn write_table<R>(path: &Path, header: &[String], rows: R) -> io::Result<()>
where
    R: IntoIterator<Item = Vec<f64>>,
{
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(header)?;
    for row in rows {
        // a non-finite value means the row is meaningless; keep the file clean
        if row.iter().all(|v| v.is_finite()) {
            w.write_record(row.into_iter().map(num))?;
        }
    }
    w.flush()
}

fn strings(h: &[&str]) -> Vec<String> {
    h.iter().map(|s| s.to_string()).collect()
}

pub fn write_miura_curves(rows: &[MiuraRow], path: &Path) -> io::Result<()> {
    write_table(
        path,
        &strings(&MIURA_HEADER),
        rows.iter()
            .map(|r| vec![r.lambda, r.folding_ratio, r.height, r.width, r.height_analytic, r.width_analytic]),
    )
}

pub fn write_annulus_curves(rows: &[AnnulusRow], path: &Path) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(ANNULUS_HEADER)?;
    for r in rows {
        let values = [r.k_f, r.bending, r.theory, r.rel_error()];
        if values.iter().all(|v| v.is_finite()) {
            let mut rec = vec![r.mesh_label()];
            rec.extend(values.into_iter().map(num));
            w.write_record(rec)?;
        }
    }
    w.flush()
}

pub fn write_cantilever_curves(rows: &[CantileverRow], path: &Path) -> io::Result<()> {
    write_table(
        path,
        &strings(&CANTILEVER_HEADER),
        rows.iter().map(|r| vec![r.load, r.u_tip, r.w_tip, r.u_oracle, r.w_oracle]),
    )
}

/// Generic curves of a simulated scene: load parameter, energies, Newton
/// statistics and the displacement of every tracked node.
pub fn write_scene_curves(scene: &Scene, traj: &Trajectory, path: &Path) -> io::Result<()> {
    let mut header = strings(&["lambda", "energy", "crease_energy", "iterations", "residual"]);
    for n in &scene.outputs.tracked_nodes {
        for c in ["u", "v", "w"] {
            header.push(format!("node{n}_{c}"));
        }
    }
    let map = scene.mesh.dof_map();
    write_table(
        path,
        &header,
        traj.points.iter().map(|p| {
            let mut row = vec![p.lambda, p.energy, p.crease_energy, p.iterations as f64, p.residual];
            for &n in &scene.outputs.tracked_nodes {
                row.extend(map.translation(n).iter().map(|&d| p.displacement[d]));
            }
            row
        }),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub scene: String,
    pub completed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub final_lambda: f64,
    pub accepted_increments: usize,
    pub attempts: usize,
    pub rejected_attempts: usize,
    pub total_iterations: usize,
    pub snapshots: usize,
    pub elapsed_seconds: f64,
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl RunSummary {
    pub fn new(scene: &str, traj: &Trajectory, error: Option<String>) -> Self {
        let accepted = traj.points.len().saturating_sub(1);
        RunSummary {
            scene: scene.to_string(),
            completed: error.is_none(),
            error,
            final_lambda: traj.final_lambda(),
            accepted_increments: accepted,
            attempts: traj.attempts.len(),
            rejected_attempts: traj.attempts.len().saturating_sub(accepted),
            total_iterations: traj.attempts.iter().map(|a| a.iterations).sum(),
            snapshots: 0,
            elapsed_seconds: 0.0,
            details: serde_json::Value::Null,
        }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}
