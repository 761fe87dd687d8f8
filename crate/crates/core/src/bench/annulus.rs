//! Flat annulus sector with a crease along its middle arc, folded by lifting
//! the crease until both sides become cone segments.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mesh::{CreaseSpec, Material, Mesh};
use crate::scene::{Component, Scene};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusParams {
    /// Radius of the creased middle arc.
    pub radius: f64,
    /// Radial width of each side of the crease.
    pub width: f64,
    /// Central angle of the sector.
    pub angle: f64,
    /// Circumferential divisions.
    pub n: usize,
    /// Radial divisions per side.
    pub m: usize,
    /// Cone parameter: folded generators make the angle `fold / 2` with the
    /// cone axis, so each side tilts by `(pi - fold) / 2`.
    pub fold: f64,
}

impl AnnulusParams {
    pub fn reference(n: usize, m: usize) -> Self {
        AnnulusParams {
            radius: 0.1,
            width: 0.005,
            angle: PI / 4.0,
            n,
            m,
            fold: PI / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason| Err(Error::InvalidParameter { name: "annulus", reason });
        if !(self.width > 0.0 && self.radius > self.width) {
            return bad("require radius > width > 0");
        }
        if !(self.angle > 0.0 && self.angle < 2.0 * PI) {
            return bad("central angle must lie in (0, 2 pi)");
        }
        if self.n == 0 || self.m == 0 {
            return bad("mesh divisions must be positive");
        }
        if !(self.fold > 0.0 && self.fold < PI) {
            return bad("fold angle must lie in (0, pi)");
        }
        Ok(())
    }

    /// Node id of circumferential index `i` and radial index `j`.
    pub fn node_id(&self, i: usize, j: usize) -> usize {
        i * (2 * self.m + 1) + j
    }

    /// Element id of cell `(i, j)`, `j < 2m`.
    pub fn element_id(&self, i: usize, j: usize) -> usize {
        i * 2 * self.m + j
    }

    /// Radial band of a side, as `(inner, outer)` radius.
    pub fn band(&self, side: Side) -> (f64, f64) {
        match side {
            Side::Inner => (self.radius - self.width, self.radius),
            Side::Outer => (self.radius, self.radius + self.width),
        }
    }

    /// Lift of the crease that tilts both sides into the target cones.
    pub fn lift(&self) -> f64 {
        self.width * (0.5 * self.fold).cos()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inner,
    Outer,
}

/// Reference material of the curved-crease test.
pub fn reference_material() -> Material {
    Material {
        youngs_modulus: 4e9,
        poisson_ratio: 0.0,
        thickness: 1e-4,
    }
}

/// Flat sector meshed `n x m` per side. Panel 0 is the inner side and panel
/// 1 the outer; crease `i` joins cells `(i, m-1)` and `(i, m)`. Supports:
/// `A` (inner arc, first angle) pinned, `B` (inner arc, last angle) with
/// `v = w = 0`, `w = 0` on the inner and outer arcs, and the crease lifted to
/// [`AnnulusParams::lift`]. The crease rests flat and `k_f` is its
/// stiffness as a multiple of the panel bending rigidity.
pub fn gen_annulus_sector(p: &AnnulusParams, material: Material, k_f: f64) -> Result<Scene> {
    p.validate()?;
    let (n, m) = (p.n, p.m);
    let mut nodes = Vec::with_capacity((n + 1) * (2 * m + 1));
    for i in 0..=n {
        let phi = 0.5 * PI - 0.5 * p.angle + p.angle * i as f64 / n as f64;
        let (s, c) = phi.sin_cos();
        for j in 0..=2 * m {
            let r = p.radius - p.width + p.width * j as f64 / m as f64;
            nodes.push([r * c, r * s, 0.0]);
        }
    }
    let mut quads = Vec::with_capacity(2 * n * m);
    let mut panels = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..2 * m {
            quads.push([p.node_id(i, j), p.node_id(i, j + 1), p.node_id(i + 1, j + 1), p.node_id(i + 1, j)]);
            panels.push(if j < m { 0 } else { 1 });
        }
    }
    // folding stiffness is given relative to the panel bending rigidity
    let stiffness = k_f * material.bending_rigidity();
    let creases: Vec<CreaseSpec> = (0..n)
        .map(|i| {
            CreaseSpec::new(
                [p.element_id(i, m - 1), p.element_id(i, m)],
                [p.node_id(i, m), p.node_id(i + 1, m)],
                stiffness,
                0.0,
            )
        })
        .collect();
    let mesh = Mesh::build(nodes, quads, panels, &creases, material)?;

    let mut scene = Scene::new("annulus_sector", mesh);
    use Component::{U, V, W};
    scene.fix(p.node_id(0, 0), &[U, V, W]);
    scene.fix(p.node_id(n, 0), &[V, W]);
    for i in 0..=n {
        scene.fix(p.node_id(i, 0), &[W]);
        scene.fix(p.node_id(i, 2 * m), &[W]);
        scene.prescribe(p.node_id(i, m), W, p.lift());
    }
    scene.solver.max_increments = 20;
    scene.outputs.tracked_nodes = alloc::vec![p.node_id(n / 2, m)];
    Ok(scene)
}

/// Elements of one side, optionally without the row touching the crease.
pub fn side_elements(p: &AnnulusParams, side: Side, include_crease_row: bool) -> Vec<usize> {
    let rows: Vec<usize> = match side {
        Side::Inner => (0..p.m).filter(|&j| include_crease_row || j != p.m - 1).collect(),
        Side::Outer => (p.m..2 * p.m).filter(|&j| include_crease_row || j != p.m).collect(),
    };
    let mut out = Vec::with_capacity(p.n * rows.len());
    for i in 0..p.n {
        for &j in &rows {
            out.push(p.element_id(i, j));
        }
    }
    out
}

/// Nonzero principal curvature of the folded cone at distance `d` from the
/// apex, measured along the axis.
pub fn cone_curvature(fold: f64, d: f64) -> f64 {
    let t = (0.5 * fold).tan();
    1.0 / (t * (1.0 + t * t).sqrt() * d)
}

/// Closed form of the cone bending energy over one side:
/// `D alpha ln(r2 / r1) / (2 tan^2(fold / 2))`.
pub fn cone_energy_closed_form(p: &AnnulusParams, material: &Material, side: Side) -> f64 {
    let (r1, r2) = p.band(side);
    let t = (0.5 * p.fold).tan();
    0.5 * material.bending_rigidity() * p.angle * (r2 / r1).ln() / (t * t)
}

/// Bending energy of one side folded isometrically onto a cone, by
/// composite Simpson quadrature over the flat band. The folding is an
/// isometry, so a flat radius `r` is the slant distance from the apex and
/// the axial distance is `r cos(fold / 2)`.
pub fn cone_theory_energy(p: &AnnulusParams, material: &Material, side: Side) -> f64 {
    let (r1, r2) = p.band(side);
    let db = material.bending_rigidity();
    let c = (0.5 * p.fold).cos();
    let integrand = |r: f64| {
        let k = cone_curvature(p.fold, r * c);
        k * k * r
    };
    let simpson = |intervals: usize| {
        let h = (r2 - r1) / intervals as f64;
        let mut s = integrand(r1) + integrand(r2);
        for k in 1..intervals {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * integrand(r1 + k as f64 * h);
        }
        s * h / 3.0
    };
    let mut intervals = 8;
    let mut last = simpson(intervals);
    loop {
        intervals *= 2;
        let next = simpson(intervals);
        if (next - last).abs() <= 1e-14 * next.abs() || intervals > 1 << 20 {
            return 0.5 * db * p.angle * next;
        }
        last = next;
    }
}
