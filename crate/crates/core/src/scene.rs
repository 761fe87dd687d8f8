//! A complete simulation input: mesh, supports, loads, solver settings and
//! what to record.

use alloc::string::String;
use alloc::vec::Vec;

use crate::assembly::BoundaryConditions;
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::solver::SolverConfig;

/// Nodal degree of freedom. Director components act on every director slot
/// at the node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    U,
    V,
    W,
    DirX,
    DirY,
    DirZ,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::U,
        Component::V,
        Component::W,
        Component::DirX,
        Component::DirY,
        Component::DirZ,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::U => "u",
            Component::V => "v",
            Component::W => "w",
            Component::DirX => "dir_x",
            Component::DirY => "dir_y",
            Component::DirZ => "dir_z",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    fn axis(self) -> usize {
        match self {
            Component::U | Component::DirX => 0,
            Component::V | Component::DirY => 1,
            Component::W | Component::DirZ => 2,
        }
    }

    fn is_director(self) -> bool {
        matches!(self, Component::DirX | Component::DirY | Component::DirZ)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodalDof {
    pub node: usize,
    pub component: Component,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalValue {
    pub node: usize,
    pub component: Component,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub tracked_nodes: Vec<usize>,
    /// Write a snapshot every this many accepted increments.
    pub snapshot_every: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            tracked_nodes: Vec::new(),
            snapshot_every: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub name: String,
    pub mesh: Mesh,
    pub fixed: Vec<NodalDof>,
    /// Total displacement reached at the end of loading.
    pub prescribed: Vec<NodalValue>,
    /// Nodal forces at full load.
    pub forces: Vec<NodalValue>,
    pub solver: SolverConfig,
    pub outputs: OutputSpec,
}

impl Scene {
    pub fn new(name: impl Into<String>, mesh: Mesh) -> Self {
        Scene {
            name: name.into(),
            mesh,
            fixed: Vec::new(),
            prescribed: Vec::new(),
            forces: Vec::new(),
            solver: SolverConfig::default(),
            outputs: OutputSpec::default(),
        }
    }

    pub fn fix(&mut self, node: usize, components: &[Component]) {
        for &component in components {
            self.fixed.push(NodalDof { node, component });
        }
    }

    pub fn prescribe(&mut self, node: usize, component: Component, value: f64) {
        self.prescribed.push(NodalValue { node, component, value });
    }

    pub fn load(&mut self, node: usize, component: Component, value: f64) {
        self.forces.push(NodalValue { node, component, value });
    }

    /// Global DOF indices addressed by a nodal component.
    pub fn dofs_of(&self, node: usize, component: Component) -> Result<Vec<usize>> {
        if node >= self.mesh.nodes().len() {
            return Err(Error::InvalidParameter {
                name: "boundary conditions",
                reason: "node index out of range",
            });
        }
        let map = self.mesh.dof_map();
        let axis = component.axis();
        Ok(if component.is_director() {
            self.mesh.slots_at(node).map(|s| map.director(s)[axis]).collect()
        } else {
            alloc::vec![map.translation(node)[axis]]
        })
    }

    pub fn boundary_conditions(&self) -> Result<BoundaryConditions> {
        let mut bcs = BoundaryConditions::default();
        for f in &self.fixed {
            bcs.fixed.extend(self.dofs_of(f.node, f.component)?);
        }
        bcs.fixed.sort_unstable();
        bcs.fixed.dedup();
        for p in &self.prescribed {
            if !p.value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "prescribed",
                    reason: "value must be finite",
                });
            }
            for d in self.dofs_of(p.node, p.component)? {
                if bcs.prescribed.iter().any(|&(e, _)| e == d) {
                    return Err(Error::OverlappingBcs { dof: d });
                }
                bcs.prescribed.push((d, p.value));
            }
        }
        for f in &self.forces {
            if !f.value.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "forces",
                    reason: "value must be finite",
                });
            }
            for d in self.dofs_of(f.node, f.component)? {
                bcs.forces.push((d, f.value));
            }
        }
        crate::assembly::partition_free_dofs(&bcs, self.mesh.total_dofs())?;
        Ok(bcs)
    }

    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if self.outputs.snapshot_every == 0 {
            return Err(Error::InvalidParameter {
                name: "outputs.snapshot_every",
                reason: "must be positive",
            });
        }
        if self.outputs.tracked_nodes.iter().any(|&n| n >= self.mesh.nodes().len()) {
            return Err(Error::InvalidParameter {
                name: "outputs.tracked_nodes",
                reason: "node index out of range",
            });
        }
        self.boundary_conditions().map(|_| ())
    }
}
