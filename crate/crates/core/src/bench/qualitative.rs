//! Larger scenes without a quantitative reference: a Miura sheet folded by
//! end compression and a closed creased annulus that buckles when lifted.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::mesh::{CreaseSpec, Material, Mesh};
use crate::scene::{Component, Scene};

use super::annulus;
use super::mesh_at_rest;
use super::miura::{self, MiuraParams};

pub fn gen_qualitative(name: &str) -> Result<Scene> {
    match name {
        "miura_sheet" => miura_sheet(5, 5),
        "full_annulus" => full_annulus(64, 2),
        other => Err(Error::UnknownScene(other.to_string())),
    }
}

/// `nx x ny` Miura cells, one element and one panel per parallelogram, every
/// interior edge a crease. The sheet starts at a fold parameter of 15 degrees
/// and the right edge is pushed to where rigid folding reaches 45 degrees.
pub fn miura_sheet(nx: usize, ny: usize) -> Result<Scene> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidParameter {
            name: "miura_sheet",
            reason: "cell counts must be positive",
        });
    }
    let p = MiuraParams::reference();
    let (cols, rows) = (2 * nx + 1, 2 * ny + 1);
    let id = |i: usize, j: usize| j * cols + i;
    let elem = |i: usize, j: usize| j * 2 * nx + i;
    let mut nodes = Vec::with_capacity(cols * rows);
    for j in 0..rows {
        for i in 0..cols {
            nodes.push(p.grid_node(i, j));
        }
    }
    let mut quads = Vec::with_capacity(4 * nx * ny);
    for j in 0..2 * ny {
        for i in 0..2 * nx {
            quads.push([id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    let panels: Vec<usize> = (0..quads.len()).collect();
    let k_f = 0.01;
    let mut creases = Vec::new();
    for j in 0..2 * ny {
        for i in 0..2 * nx - 1 {
            creases.push(CreaseSpec::new([elem(i, j), elem(i + 1, j)], [id(i + 1, j), id(i + 1, j + 1)], k_f, 0.0));
        }
    }
    for j in 0..2 * ny - 1 {
        for i in 0..2 * nx {
            creases.push(CreaseSpec::new([elem(i, j), elem(i, j + 1)], [id(i, j + 1), id(i + 1, j + 1)], k_f, 0.0));
        }
    }
    let mesh = mesh_at_rest(nodes, quads, panels, &creases, miura::reference_material())?;

    let folded = MiuraParams { beta: PI / 4.0, ..p };
    let stroke = 2.0 * nx as f64 * (folded.half_length() - p.half_length());
    let mut scene = Scene::new("miura_sheet", mesh);
    use Component::{U, V, W};
    scene.fix(id(0, 0), &[U, V, W]);
    for j in 0..rows {
        scene.fix(id(0, j), &[U]);
        scene.prescribe(id(cols - 1, j), U, stroke);
    }
    for j in (0..rows).step_by(2) {
        for i in 0..cols {
            scene.fix(id(i, j), &[W]);
        }
    }
    scene.solver.max_increments = 50;
    scene.outputs.tracked_nodes = alloc::vec![id(cols - 1, rows / 2)];
    scene.outputs.snapshot_every = 5;
    Ok(scene)
}

/// Closed ring with a circular crease on its middle circle. The crease is
/// lifted by a non-uniform amount around the ring, which no pair of cones
/// can accommodate isometrically, so the sides buckle. Barrier limits at
/// `0.6 pi` keep the fold away from self-penetration.
pub fn full_annulus(n: usize, m: usize) -> Result<Scene> {
    if n < 3 || m == 0 {
        return Err(Error::InvalidParameter {
            name: "full_annulus",
            reason: "need at least three sectors and one radial division",
        });
    }
    let (radius, width) = (0.1, 0.01);
    let material = Material {
        thickness: 1e-4,
        ..annulus::reference_material()
    };
    let per_ring = 2 * m + 1;
    let id = |i: usize, j: usize| (i % n) * per_ring + j;
    let elem = |i: usize, j: usize| i * 2 * m + j;
    let angle = |i: usize| 2.0 * PI * i as f64 / n as f64;
    let mut nodes = Vec::with_capacity(n * per_ring);
    for i in 0..n {
        let (s, c) = angle(i).sin_cos();
        for j in 0..per_ring {
            let r = radius - width + width * j as f64 / m as f64;
            nodes.push([r * c, r * s, 0.0]);
        }
    }
    let mut quads = Vec::with_capacity(2 * n * m);
    let mut panels = Vec::with_capacity(2 * n * m);
    for i in 0..n {
        for j in 0..2 * m {
            quads.push([id(i, j), id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]);
            panels.push(if j < m { 0 } else { 1 });
        }
    }
    let limit = 0.6 * PI;
    let creases: Vec<CreaseSpec> = (0..n)
        .map(|i| CreaseSpec {
            limits: Some((-limit, limit)),
            ..CreaseSpec::new([elem(i, m - 1), elem(i, m)], [id(i, m), id(i + 1, m)], 1e-3, 0.0)
        })
        .collect();
    let mesh = Mesh::build(nodes, quads, panels, &creases, material)?;

    let mut scene = Scene::new("full_annulus", mesh);
    use Component::{U, V, W};
    for i in 0..n {
        scene.fix(id(i, 0), &[W]);
        scene.fix(id(i, 2 * m), &[W]);
        let lift = width * (0.75 + 0.2 * (2.0 * angle(i)).cos());
        scene.prescribe(id(i, m), W, lift);
    }
    // in-plane rigid motions
    scene.fix(id(0, 0), &[V]);
    scene.fix(id(n / 2, 0), &[V]);
    scene.fix(id(n / 4, 0), &[U]);
    scene.solver.max_increments = 40;
    scene.outputs.tracked_nodes = (0..4).map(|q| id(q * n / 4, m)).collect();
    scene.outputs.snapshot_every = 4;
    Ok(scene)
}
