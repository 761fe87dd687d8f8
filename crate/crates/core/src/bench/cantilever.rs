//! Clamped strip under a tip shear, with an inextensible-elastica reference.

use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::mesh::{Material, Mesh};
use crate::scene::{Component, Scene};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantileverConfig {
    pub length: f64,
    pub width: f64,
    /// Elements along the length.
    pub nx: usize,
    /// Elements across the width.
    pub ny: usize,
    /// Total tip shear at full load.
    pub load: f64,
    pub increments: usize,
    pub material: Material,
}

impl Default for CantileverConfig {
    fn default() -> Self {
        CantileverConfig {
            length: 10.0,
            width: 1.0,
            nx: 10,
            ny: 1,
            load: 4000.0,
            increments: 10,
            material: Material {
                youngs_modulus: 1.2e9,
                poisson_ratio: 0.0,
                thickness: 0.1,
            },
        }
    }
}

impl CantileverConfig {
    pub fn with_mesh(nx: usize, ny: usize) -> Self {
        CantileverConfig { nx, ny, ..Self::default() }
    }

    /// Bending stiffness of the whole cross-section.
    pub fn flexural_rigidity(&self) -> f64 {
        self.material.bending_rigidity() * self.width * (1.0 - self.material.poisson_ratio.powi(2))
    }

    pub fn node_id(&self, i: usize, j: usize) -> usize {
        j * (self.nx + 1) + i
    }

    /// Nodes on the loaded end.
    pub fn tip_nodes(&self) -> Vec<usize> {
        (0..=self.ny).map(|j| self.node_id(self.nx, j)).collect()
    }

    /// Mean tip displacement `(u, w)` of a nodal displacement field.
    pub fn tip_displacement(&self, mesh: &Mesh, u: &[f64]) -> (f64, f64) {
        let tip = self.tip_nodes();
        let (mut su, mut sw) = (0.0, 0.0);
        for &n in &tip {
            let d = mesh.dof_map().translation(n);
            su += u[d[0]];
            sw += u[d[2]];
        }
        (su / tip.len() as f64, sw / tip.len() as f64)
    }
}

/// Strip clamped at `x = 0` (translations and directors), loaded in `z` at
/// `x = length` with the total shear shared by trapezoid weights.
pub fn gen_cantilever(config: &CantileverConfig) -> Result<Scene> {
    let c = config;
    if c.nx == 0 || c.ny == 0 || c.increments == 0 {
        return Err(Error::InvalidParameter {
            name: "cantilever",
            reason: "mesh divisions and increments must be positive",
        });
    }
    if !(c.length > 0.0 && c.width > 0.0 && c.load.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "cantilever",
            reason: "dimensions must be positive and the load finite",
        });
    }
    let mut nodes: Vec<Vec3> = Vec::with_capacity((c.nx + 1) * (c.ny + 1));
    for j in 0..=c.ny {
        for i in 0..=c.nx {
            nodes.push([c.length * i as f64 / c.nx as f64, c.width * j as f64 / c.ny as f64, 0.0]);
        }
    }
    let mut quads = Vec::with_capacity(c.nx * c.ny);
    for j in 0..c.ny {
        for i in 0..c.nx {
            quads.push([c.node_id(i, j), c.node_id(i + 1, j), c.node_id(i + 1, j + 1), c.node_id(i, j + 1)]);
        }
    }
    let panels = alloc::vec![0; quads.len()];
    let mesh = Mesh::build(nodes, quads, panels, &[], c.material)?;
    let mut scene = Scene::new("cantilever", mesh);
    for j in 0..=c.ny {
        scene.fix(c.node_id(0, j), &Component::ALL);
    }
    for j in 0..=c.ny {
        let w = if j == 0 || j == c.ny { 0.5 } else { 1.0 };
        scene.load(c.node_id(c.nx, j), Component::W, c.load * w / c.ny as f64);
    }
    scene.solver.max_increments = c.increments;
    scene.outputs.tracked_nodes = c.tip_nodes();
    Ok(scene)
}

/// Tip displacement `(u, w)` of an inextensible elastica of length `l` and
/// rigidity `ei` under a dead tip load `p` normal to the undeformed axis.
/// `u` is the axial displacement, so it is negative under load.
///
/// Shoots on the root curvature by bisection and doubles the RK4 resolution
/// until successive tip positions agree to `1e-11`.
pub fn elastica(p: f64, l: f64, ei: f64) -> (f64, f64) {
    if p == 0.0 {
        return (0.0, 0.0);
    }
    let q = p / ei;
    let mut steps = 64;
    let mut last = elastica_at_resolution(q, l, steps);
    loop {
        steps *= 2;
        let next = elastica_at_resolution(q, l, steps);
        let change = (next.0 - last.0).abs().max((next.1 - last.1).abs());
        if change <= 1e-11 * l || steps >= 1 << 16 {
            return next;
        }
        last = next;
    }
}

/// Tip deflection of the default strip under total tip load `p`.
pub fn elastica_oracle(p: f64) -> (f64, f64) {
    let c = CantileverConfig::default();
    elastica(p, c.length, c.flexural_rigidity())
}

fn elastica_at_resolution(q: f64, l: f64, steps: usize) -> (f64, f64) {
    // the end moment vanishes at the correct root curvature
    let (mut lo, mut hi) = (0.0, q.abs() * l);
    let sign = q.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let end = integrate(q, sign * mid, l, steps);
        if sign * end[1] < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi.max(1.0) {
            break;
        }
    }
    let end = integrate(q, sign * 0.5 * (lo + hi), l, steps);
    (end[2] - l, end[3])
}

/// RK4 for `theta' = kappa`, `kappa' = -q cos(theta)`, `x' = cos`, `z' = sin`.
fn integrate(q: f64, kappa0: f64, l: f64, steps: usize) -> [f64; 4] {
    let f = |y: [f64; 4]| {
        let (s, c) = y[0].sin_cos();
        [y[1], -q * c, c, s]
    };
    let h = l / steps as f64;
    let mut y = [0.0, kappa0, 0.0, 0.0];
    for _ in 0..steps {
        let k1 = f(y);
        let k2 = f(shift(y, k1, 0.5 * h));
        let k3 = f(shift(y, k2, 0.5 * h));
        let k4 = f(shift(y, k3, h));
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

fn shift(y: [f64; 4], k: [f64; 4], h: f64) -> [f64; 4] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_strip() {
        let c = CantileverConfig::default();
        assert!((c.flexural_rigidity() - 1e5).abs() < 1e-6);
        let scene = gen_cantilever(&c).unwrap();
        assert_eq!(scene.mesh.elements().len(), 10);
        let bcs = scene.boundary_conditions().unwrap();
        // two clamped nodes with three translations and three director components
        assert_eq!(bcs.fixed.len(), 12);
        let total: f64 = bcs.forces.iter().map(|f| f.1).sum();
        assert_eq!(total, 4000.0);
        assert!(bcs.forces.iter().all(|f| f.1 == 2000.0));
    }

    #[test]
    fn trapezoid_load_sharing() {
        let scene = gen_cantilever(&CantileverConfig::with_mesh(40, 4)).unwrap();
        let f: Vec<f64> = scene.forces.iter().map(|f| f.value).collect();
        assert_eq!(f, [500.0, 1000.0, 1000.0, 1000.0, 500.0]);
    }

    #[test]
    fn small_load_matches_linear_beam() {
        let (u, w) = elastica_oracle(40.0);
        let linear = 40.0 * 1000.0 / 3e5;
        assert!((w - linear).abs() < 0.02 * linear);
        // second-order shortening of a cubic deflection curve
        let shortening = 0.6 * linear * linear / 10.0;
        assert!((-u - shortening).abs() < 0.02 * shortening);
    }

    #[test]
    fn unloaded_and_self_consistent() {
        assert_eq!(elastica_oracle(0.0), (0.0, 0.0));
        let (u, w) = elastica_oracle(4000.0);
        let c = CantileverConfig::default();
        let q = 4000.0 / c.flexural_rigidity();
        let coarse = elastica_at_resolution(q, 10.0, 4096);
        let fine = elastica_at_resolution(q, 10.0, 8192);
        assert!((coarse.0 - fine.0).abs() < 1e-8 && (coarse.1 - fine.1).abs() < 1e-8);
        assert!((u - fine.0).abs() < 1e-8 && (w - fine.1).abs() < 1e-8);
        // the tip stays on a circle of radius at most the length around the root
        assert!((10.0 + u).powi(2) + w * w < 100.0);
        assert!(w > 0.0 && u < 0.0);
    }

    #[test]
    fn load_sign_mirrors() {
        let (u1, w1) = elastica_oracle(2500.0);
        let (u2, w2) = elastica_oracle(-2500.0);
        assert!((u1 - u2).abs() < 1e-12 && (w1 + w2).abs() < 1e-12);
    }
}
