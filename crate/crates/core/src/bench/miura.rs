//! Miura-ori unit cell compressed along its corrugation.
//!
//! The cell is a 3x3 node grid of four parallelogram panels with sides `a`
//! (along y) and `b`, sector angle `gamma`, folded by `beta` from flat.
//! Node `(i, j)` sits at `x = i S`, `y = j W/2` (plus `V` on the middle
//! column) and `z = H` on the middle row.

use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{self, Vec3};
use crate::mesh::{CreaseSpec, Material};
use crate::scene::{Component, Scene};

use super::mesh_at_rest;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiuraParams {
    pub a: f64,
    pub b: f64,
    /// Panel sector angle.
    pub gamma: f64,
    /// Fold parameter; zero is flat.
    pub beta: f64,
}

impl MiuraParams {
    pub fn reference() -> Self {
        MiuraParams {
            a: 2.0,
            b: 2.0,
            gamma: PI / 3.0,
            beta: PI / 12.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason| Err(Error::InvalidParameter { name: "miura", reason });
        if !(self.a > 0.0 && self.b > 0.0) {
            return bad("panel sides must be positive");
        }
        if !(self.gamma > 0.0 && self.gamma < PI / 2.0) {
            return bad("sector angle must lie in (0, pi/2)");
        }
        if !(self.beta >= 0.0 && self.beta <= PI / 2.0) {
            return bad("fold parameter must lie in [0, pi/2]");
        }
        Ok(())
    }

    pub fn half_length(&self) -> f64 {
        let t = self.beta.cos() * self.gamma.tan();
        self.b * t / (1.0 + t * t).sqrt()
    }

    fn column_shift(&self) -> f64 {
        let t = self.beta.cos() * self.gamma.tan();
        self.b / (1.0 + t * t).sqrt()
    }

    /// Length of the flat cell along the compression axis, `2 b sin(gamma)`.
    pub fn flat_length(&self) -> f64 {
        2.0 * self.b * self.gamma.sin()
    }

    /// Position of grid node `(i, j)` of a tessellation of unit cells.
    pub fn grid_node(&self, i: usize, j: usize) -> Vec3 {
        let (sb, sg) = (self.beta.sin(), self.gamma.sin());
        let height = self.a * sb * sg;
        let half_width = self.a * (1.0 - sb * sb * sg * sg).sqrt();
        [
            i as f64 * self.half_length(),
            j as f64 * half_width + if i % 2 == 1 { self.column_shift() } else { 0.0 },
            if j % 2 == 1 { height } else { 0.0 },
        ]
    }
}

/// Rigid-folding extents of the unit cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiuraShape {
    pub height: f64,
    pub length: f64,
    pub width: f64,
}

pub fn miura_analytic(p: &MiuraParams) -> MiuraShape {
    let (sb, sg) = (p.beta.sin(), p.gamma.sin());
    MiuraShape {
        height: p.a * sb * sg,
        length: 2.0 * p.half_length(),
        width: 2.0 * p.a * (1.0 - sb * sb * sg * sg).sqrt(),
    }
}

/// Fold parameter for a given height (clamped to the attainable range).
pub fn beta_from_height(p: &MiuraParams, height: f64) -> f64 {
    (height / (p.a * p.gamma.sin())).clamp(0.0, 1.0).asin()
}

/// Node index of `(i, j)` in the unit-cell grid.
pub fn node_id(i: usize, j: usize) -> usize {
    3 * j + i
}

pub struct MiuraMeasurement {
    pub height: f64,
    pub length: f64,
    pub width: f64,
    pub beta: f64,
}

/// Extents of a deformed unit cell from its nine node positions. `width`
/// and `length` are the corner-to-corner distances along the two edges at
/// `(0, 0)`; `height` is the mean distance of the middle row from the plane
/// through the three outer corners.
pub fn measure_miura(p: &MiuraParams, x: &[Vec3]) -> MiuraMeasurement {
    let o = x[node_id(0, 0)];
    let along = math::sub(x[node_id(2, 0)], o);
    let across = math::sub(x[node_id(0, 2)], o);
    let normal = math::normalize(math::cross(along, across)).unwrap_or([0.0, 0.0, 1.0]);
    let height = (0..3)
        .map(|i| math::dot(math::sub(x[node_id(i, 1)], o), normal).abs())
        .sum::<f64>()
        / 3.0;
    MiuraMeasurement {
        height,
        length: math::norm(along),
        width: math::norm(across),
        beta: beta_from_height(p, height),
    }
}

/// Total prescribed x-displacement of the right edge in the reference run.
pub const COMPRESSION: f64 = -3.44;

/// Unit cell with the reference supports: `O = (0,0)` pinned, `u = 0` at
/// `A = (0,1)` and `B = (0,2)`, `w = 0` at O, B, `C = (1,0)`, `D = (1,2)`,
/// `E = (2,0)` and `G = (2,2)`, and `u = compression` at E, `F = (2,1)` and
/// G. Crease rest angles are the initial dihedral angles.
pub fn gen_miura_unit(p: &MiuraParams, material: Material, k_f: f64, compression: f64) -> Result<Scene> {
    p.validate()?;
    let mut nodes = Vec::with_capacity(9);
    for j in 0..3 {
        for i in 0..3 {
            nodes.push(p.grid_node(i, j));
        }
    }
    let quad = |i: usize, j: usize| [node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1), node_id(i, j + 1)];
    let quads = alloc::vec![quad(0, 0), quad(1, 0), quad(0, 1), quad(1, 1)];
    let c = node_id(1, 1);
    let creases = [
        CreaseSpec::new([0, 1], [node_id(1, 0), c], k_f, 0.0),
        CreaseSpec::new([2, 3], [c, node_id(1, 2)], k_f, 0.0),
        CreaseSpec::new([0, 2], [node_id(0, 1), c], k_f, 0.0),
        CreaseSpec::new([1, 3], [c, node_id(2, 1)], k_f, 0.0),
    ];
    let mesh = mesh_at_rest(nodes, quads, alloc::vec![0, 1, 2, 3], &creases, material)?;
    let mut scene = Scene::new("miura_unit", mesh);
    use Component::{U, V, W};
    scene.fix(node_id(0, 0), &[U, V, W]);
    scene.fix(node_id(0, 1), &[U]);
    scene.fix(node_id(0, 2), &[U, W]);
    for (i, j) in [(1, 0), (1, 2), (2, 0), (2, 2)] {
        scene.fix(node_id(i, j), &[W]);
    }
    for j in 0..3 {
        scene.prescribe(node_id(2, j), U, compression);
    }
    scene.solver.max_increments = 100;
    scene.outputs.tracked_nodes = (0..9).collect();
    Ok(scene)
}

/// Reference material: stiff panels so the cell folds like rigid origami.
pub fn reference_material() -> Material {
    Material {
        youngs_modulus: 12e9,
        poisson_ratio: 0.3,
        thickness: 0.01,
    }
}
