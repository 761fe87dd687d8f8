//! Benchmark scenes with analytical references, and two larger scenes for
//! qualitative runs.

pub mod annulus;
pub mod cantilever;
pub mod miura;
pub mod qualitative;

use alloc::vec::Vec;

use crate::crease::fold_angle_at;
use crate::error::Result;
use crate::math::Vec3;
use crate::mesh::{CreaseSpec, Material, Mesh};

pub use annulus::{cone_theory_energy, gen_annulus_sector, AnnulusParams, Side};
pub use cantilever::{elastica_oracle, gen_cantilever, CantileverConfig};
pub use miura::{gen_miura_unit, measure_miura, miura_analytic, MiuraParams};
pub use qualitative::gen_qualitative;

/// Builds a mesh whose creases rest at the fold angles of the given
/// geometry, so the initial state carries no crease moment.
pub fn mesh_at_rest(
    nodes: Vec<Vec3>,
    quads: Vec<[usize; 4]>,
    panels: Vec<usize>,
    creases: &[CreaseSpec],
    material: Material,
) -> Result<Mesh> {
    let flat: Vec<CreaseSpec> = creases
        .iter()
        .map(|c| CreaseSpec {
            rest_angle: 0.0,
            limits: None,
            ..*c
        })
        .collect();
    let probe = Mesh::build(nodes.clone(), quads.clone(), panels.clone(), &flat, material)?;
    let zero = alloc::vec![0.0; probe.total_dofs()];
    let mut rested = Vec::with_capacity(creases.len());
    for (i, c) in creases.iter().enumerate() {
        let theta = fold_angle_at(&probe, i, &zero, 0.0)?.theta;
        rested.push(CreaseSpec {
            rest_angle: theta,
            limits: None,
            ..*c
        });
    }
    Mesh::build(nodes, quads, panels, &rested, material)
}
