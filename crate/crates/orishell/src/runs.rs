//! Benchmark drivers: solve a reference scene and reduce the trajectory to
//! the quantities compared against the analytical references.

use orishell_core::assembly::Assembler;
use orishell_core::bench::{self, annulus, miura, AnnulusParams, CantileverConfig, MiuraParams, Side};
use orishell_core::solver::{run, SolveFailure};
use orishell_core::{Scene, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiuraRow {
    pub lambda: f64,
    /// Corner-to-corner length over the flat length `2 b sin(gamma)`.
    pub folding_ratio: f64,
    pub height: f64,
    pub width: f64,
    /// Analytical extents at the fold parameter recovered from the height.
    pub height_analytic: f64,
    pub width_analytic: f64,
}

pub struct MiuraRun {
    pub scene: Scene,
    pub params: MiuraParams,
    pub result: Result<Trajectory, SolveFailure>,
}

impl MiuraRun {
    pub fn trajectory(&self) -> &Trajectory {
        match &self.result {
            Ok(t) => t,
            Err(f) => &f.trajectory,
        }
    }

    pub fn rows(&self) -> Vec<MiuraRow> {
        let p = &self.params;
        self.trajectory()
            .points
            .iter()
            .map(|pt| {
                let x = self.scene.mesh.deformed_nodes(&pt.displacement);
                let m = bench::measure_miura(p, &x);
                let a = bench::miura_analytic(&MiuraParams { beta: m.beta, ..*p });
                MiuraRow {
                    lambda: pt.lambda,
                    folding_ratio: m.length / p.flat_length(),
                    height: m.height,
                    width: m.width,
                    height_analytic: a.height,
                    width_analytic: a.width,
                }
            })
            .collect()
    }
}

/// The reference unit cell compressed by the reference stroke.
pub fn run_miura() -> MiuraRun {
    let params = MiuraParams::reference();
    let scene = bench::gen_miura_unit(&params, miura::reference_material(), 0.01, miura::COMPRESSION)
        .expect("reference cell is valid");
    let result = run(&scene, &scene.solver);
    MiuraRun { scene, params, result }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusRow {
    pub n: usize,
    pub m: usize,
    pub k_f: f64,
    /// Bending energy of every element on the measured side.
    pub bending: f64,
    /// Same, leaving out the row of elements along the crease.
    pub bending_without_crease_row: f64,
    pub theory: f64,
}

impl AnnulusRow {
    pub fn mesh_label(&self) -> String {
        format!("{}x{}", self.n, self.m)
    }

    pub fn rel_error(&self) -> f64 {
        (self.bending - self.theory) / self.theory
    }
}

/// Side on which the bending energy is compared with the cone.
pub const MEASURED_SIDE: Side = Side::Outer;

pub const ANNULUS_MESHES: [(usize, usize); 3] = [(32, 4), (64, 8), (128, 16)];
pub const ANNULUS_STIFFNESSES: [f64; 3] = [0.1, 0.5, 1.0];

/// Folds one sector and measures the bending energy of [`MEASURED_SIDE`].
pub fn run_annulus(n: usize, m: usize, k_f: f64) -> Result<AnnulusRow, SolveFailure> {
    let p = AnnulusParams::reference(n, m);
    let material = annulus::reference_material();
    let scene = bench::gen_annulus_sector(&p, material, k_f)?;
    let traj = run(&scene, &scene.solver)?;
    let u = &traj.last().expect("a completed run has points").displacement;
    let assembler = Assembler::new(&scene.mesh)?;
    Ok(AnnulusRow {
        n,
        m,
        k_f,
        bending: assembler.bending_energy(u, &annulus::side_elements(&p, MEASURED_SIDE, true)),
        bending_without_crease_row: assembler.bending_energy(u, &annulus::side_elements(&p, MEASURED_SIDE, false)),
        theory: bench::cone_theory_energy(&p, &material, MEASURED_SIDE),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantileverRow {
    pub load: f64,
    pub u_tip: f64,
    pub w_tip: f64,
    pub u_oracle: f64,
    pub w_oracle: f64,
}

pub struct CantileverRun {
    pub config: CantileverConfig,
    pub scene: Scene,
    pub result: Result<Trajectory, SolveFailure>,
}

impl CantileverRun {
    pub fn trajectory(&self) -> &Trajectory {
        match &self.result {
            Ok(t) => t,
            Err(f) => &f.trajectory,
        }
    }

    pub fn rows(&self) -> Vec<CantileverRow> {
        let c = &self.config;
        self.trajectory()
            .points
            .iter()
            .map(|pt| {
                let (u_tip, w_tip) = c.tip_displacement(&self.scene.mesh, &pt.displacement);
                let load = pt.lambda * c.load;
                let (u_oracle, w_oracle) = bench::cantilever::elastica(load, c.length, c.flexural_rigidity());
                CantileverRow {
                    load,
                    u_tip,
                    w_tip,
                    u_oracle,
                    w_oracle,
                }
            })
            .collect()
    }
}

pub fn run_cantilever(nx: usize, ny: usize) -> CantileverRun {
    let config = CantileverConfig::with_mesh(nx, ny);
    let scene = bench::gen_cantilever(&config).expect("reference strip is valid");
    let result = run(&scene, &scene.solver);
    CantileverRun { config, scene, result }
}
