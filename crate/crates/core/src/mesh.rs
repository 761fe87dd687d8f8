//! Geometry, connectivity, panel grouping, crease topology and DOF numbering.
//!
//! Directors live on `(panel, node)` slots. Inside a panel the director field
//! is continuous, so every element of the panel shares the slot at a node;
//! across a crease the two panels own separate slots at the shared nodes.

use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::crease::CreaseParams;
use crate::element::shape::{shape_functions, GAUSS_2X2};
use crate::error::{Error, Result};
use crate::math::{self, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub thickness: f64,
}

impl Material {
    pub fn new(youngs_modulus: f64, poisson_ratio: f64, thickness: f64) -> Result<Self> {
        let m = Material {
            youngs_modulus,
            poisson_ratio,
            thickness,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.youngs_modulus > 0.0 && self.youngs_modulus.is_finite()) {
            return Err(Error::InvalidMaterial("Young's modulus must be positive"));
        }
        if !(self.poisson_ratio > -1.0 && self.poisson_ratio < 0.5) {
            return Err(Error::InvalidMaterial("Poisson's ratio must lie in (-1, 0.5)"));
        }
        if !(self.thickness > 0.0 && self.thickness.is_finite()) {
            return Err(Error::InvalidMaterial("thickness must be positive"));
        }
        Ok(())
    }

    /// Plate bending rigidity `E h^3 / 12 (1 - nu^2)`.
    pub fn bending_rigidity(&self) -> f64 {
        let h = self.thickness;
        self.youngs_modulus * h * h * h / (12.0 * (1.0 - self.poisson_ratio * self.poisson_ratio))
    }
}

/// Four-node quadrilateral, nodes counterclockwise about the panel normal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadElement {
    pub nodes: [usize; 4],
    pub panel: usize,
}

/// Crease as given by a scene: the two elements that meet along it, the
/// shared edge endpoints and the folding law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreaseSpec {
    pub elements: [usize; 2],
    pub nodes: [usize; 2],
    pub stiffness: f64,
    pub rest_angle: f64,
    /// Barrier activation angles; defaults apply when `None`.
    pub limits: Option<(f64, f64)>,
}

impl CreaseSpec {
    pub fn new(elements: [usize; 2], nodes: [usize; 2], stiffness: f64, rest_angle: f64) -> Self {
        CreaseSpec {
            elements,
            nodes,
            stiffness,
            rest_angle,
            limits: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreaseSegment {
    pub elem_a: usize,
    pub elem_b: usize,
    pub node1: usize,
    pub node2: usize,
    /// Rest length `|X_o2 - X_o1|`.
    pub length: f64,
    pub params: CreaseParams,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectorSlot {
    pub panel: usize,
    pub node: usize,
    /// Initial director, length `h/2`, normal to the flat panel.
    pub director: Vec3,
}

/// Global numbering: for each node its three translations followed by three
/// director components per incident panel (ascending panel id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    node_offset: Vec<usize>,
    slot_offset: Vec<usize>,
    total: usize,
}

impl DofMap {
    /// `slots` must be sorted by node, then panel (as produced by
    /// [`init_directors`]).
    pub fn build(num_nodes: usize, slots: &[DirectorSlot]) -> Self {
        let mut node_offset = vec![0; num_nodes];
        let mut slot_offset = vec![0; slots.len()];
        let mut next = 0;
        let mut s = 0;
        for node in 0..num_nodes {
            node_offset[node] = next;
            next += 3;
            while s < slots.len() && slots[s].node == node {
                slot_offset[s] = next;
                next += 3;
                s += 1;
            }
        }
        DofMap {
            node_offset,
            slot_offset,
            total: next,
        }
    }

    pub fn translation(&self, node: usize) -> [usize; 3] {
        let o = self.node_offset[node];
        [o, o + 1, o + 2]
    }

    pub fn director(&self, slot: usize) -> [usize; 3] {
        let o = self.slot_offset[slot];
        [o, o + 1, o + 2]
    }

    pub fn total_dofs(&self) -> usize {
        self.total
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    nodes: Vec<Vec3>,
    elements: Vec<QuadElement>,
    creases: Vec<CreaseSegment>,
    material: Material,
    slots: Vec<DirectorSlot>,
    /// Director slot of each element node.
    element_slots: Vec<[usize; 4]>,
    /// Slots `[a@node1, a@node2, b@node1, b@node2]` of each crease.
    crease_slots: Vec<[usize; 4]>,
    dofs: DofMap,
}

impl Mesh {
    /// Validates the topology, initialises directors and numbers the DOFs.
    pub fn build(
        nodes: Vec<Vec3>,
        quads: Vec<[usize; 4]>,
        panels: Vec<usize>,
        creases: &[CreaseSpec],
        material: Material,
    ) -> Result<Self> {
        material.validate()?;
        if panels.len() != quads.len() {
            return Err(Error::InvalidParameter {
                name: "panels",
                reason: "one panel id per element required",
            });
        }
        let elements: Vec<QuadElement> = quads
            .iter()
            .zip(&panels)
            .map(|(&nodes, &panel)| QuadElement { nodes, panel })
            .collect();
        validate_connectivity(&nodes, &elements)?;
        validate_panels(&elements)?;
        let segments = build_creases(&nodes, &elements, creases)?;

        let slots = init_directors(&nodes, &elements, material.thickness)?;
        let element_slots = elements
            .iter()
            .map(|e| e.nodes.map(|n| find_slot(&slots, e.panel, n).expect("slot exists")))
            .collect();
        let crease_slots = segments
            .iter()
            .map(|c| {
                let pa = elements[c.elem_a].panel;
                let pb = elements[c.elem_b].panel;
                [
                    find_slot(&slots, pa, c.node1).expect("slot exists"),
                    find_slot(&slots, pa, c.node2).expect("slot exists"),
                    find_slot(&slots, pb, c.node1).expect("slot exists"),
                    find_slot(&slots, pb, c.node2).expect("slot exists"),
                ]
            })
            .collect();
        let dofs = DofMap::build(nodes.len(), &slots);
        let mesh = Mesh {
            nodes,
            elements,
            creases: segments,
            material,
            slots,
            element_slots,
            crease_slots,
            dofs,
        };
        mesh.check_jacobians()?;
        Ok(mesh)
    }

    fn check_jacobians(&self) -> Result<()> {
        for e in 0..self.elements.len() {
            let (xo, xn) = self.element_geometry(e);
            for &(xi, eta, _) in GAUSS_2X2.iter() {
                let sf = shape_functions(xi, eta);
                let mut gxi = [0.0; 3];
                let mut geta = [0.0; 3];
                let mut dir = [0.0; 3];
                for i in 0..4 {
                    gxi = math::axpy(gxi, sf.dxi[i], xo[i]);
                    geta = math::axpy(geta, sf.deta[i], xo[i]);
                    dir = math::axpy(dir, sf.n[i], xn[i]);
                }
                let jac = math::dot(math::cross(gxi, geta), dir);
                if !(jac > 0.0) {
                    return Err(Error::DegenerateElement {
                        element: e,
                        jacobian: jac,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn elements(&self) -> &[QuadElement] {
        &self.elements
    }

    pub fn creases(&self) -> &[CreaseSegment] {
        &self.creases
    }

    pub fn material(&self) -> &Material {
        &self.material
    }

    pub fn director_slots(&self) -> &[DirectorSlot] {
        &self.slots
    }

    pub fn dof_map(&self) -> &DofMap {
        &self.dofs
    }

    pub fn total_dofs(&self) -> usize {
        self.dofs.total
    }

    pub fn num_panels(&self) -> usize {
        self.elements.iter().map(|e| e.panel + 1).max().unwrap_or(0)
    }

    pub fn element_slots(&self, element: usize) -> [usize; 4] {
        self.element_slots[element]
    }

    pub fn crease_slots(&self, crease: usize) -> [usize; 4] {
        self.crease_slots[crease]
    }

    /// Slot ids of every director at `node`, ascending by panel.
    pub fn slots_at(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.slots.partition_point(|s| s.node < node);
        (start..self.slots.len()).take_while(move |&s| self.slots[s].node == node)
    }

    /// Initial mid-surface positions and directors of an element's nodes.
    pub fn element_geometry(&self, element: usize) -> ([Vec3; 4], [Vec3; 4]) {
        let el = &self.elements[element];
        let slots = self.element_slots[element];
        (
            el.nodes.map(|n| self.nodes[n]),
            slots.map(|s| self.slots[s].director),
        )
    }

    /// Global indices in element order: `U_o1..U_o4` then `U_n1..U_n4`.
    pub fn element_dofs(&self, element: usize) -> [usize; 24] {
        let el = &self.elements[element];
        let slots = self.element_slots[element];
        let mut out = [0; 24];
        for i in 0..4 {
            out[3 * i..3 * i + 3].copy_from_slice(&self.dofs.translation(el.nodes[i]));
            out[12 + 3 * i..12 + 3 * i + 3].copy_from_slice(&self.dofs.director(slots[i]));
        }
        out
    }

    /// Global indices of the four director slots a crease couples.
    pub fn crease_dofs(&self, crease: usize) -> [usize; 12] {
        let mut out = [0; 12];
        for (k, &s) in self.crease_slots[crease].iter().enumerate() {
            out[3 * k..3 * k + 3].copy_from_slice(&self.dofs.director(s));
        }
        out
    }

    /// Gathers element-local displacements from a global vector.
    pub fn gather_element(&self, element: usize, u: &[f64]) -> [f64; 24] {
        self.element_dofs(element).map(|d| u[d])
    }

    /// Mean element edge length.
    pub fn characteristic_size(&self) -> f64 {
        if self.elements.is_empty() {
            return 1.0;
        }
        let mut sum = 0.0;
        for e in &self.elements {
            for i in 0..4 {
                let a = self.nodes[e.nodes[i]];
                let b = self.nodes[e.nodes[(i + 1) % 4]];
                sum += math::norm(math::sub(b, a));
            }
        }
        sum / (4.0 * self.elements.len() as f64)
    }

    /// Current mid-surface position of every node.
    pub fn deformed_nodes(&self, u: &[f64]) -> Vec<Vec3> {
        self.nodes
            .iter()
            .enumerate()
            .map(|(n, x)| {
                let d = self.dofs.translation(n);
                [x[0] + u[d[0]], x[1] + u[d[1]], x[2] + u[d[2]]]
            })
            .collect()
    }

    /// Current director of a slot.
    pub fn deformed_director(&self, slot: usize, u: &[f64]) -> Vec3 {
        let d = self.dofs.director(slot);
        let x = self.slots[slot].director;
        [x[0] + u[d[0]], x[1] + u[d[1]], x[2] + u[d[2]]]
    }

    /// Mid-surface area of an element (2x2 Gauss on the flat reference).
    pub fn element_area(&self, element: usize) -> f64 {
        let (xo, _) = self.element_geometry(element);
        GAUSS_2X2
            .iter()
            .map(|&(xi, eta, w)| {
                let sf = shape_functions(xi, eta);
                let mut gxi = [0.0; 3];
                let mut geta = [0.0; 3];
                for i in 0..4 {
                    gxi = math::axpy(gxi, sf.dxi[i], xo[i]);
                    geta = math::axpy(geta, sf.deta[i], xo[i]);
                }
                w * math::norm(math::cross(gxi, geta))
            })
            .sum()
    }
}

fn find_slot(slots: &[DirectorSlot], panel: usize, node: usize) -> Option<usize> {
    slots
        .binary_search_by(|s| (s.node, s.panel).cmp(&(node, panel)))
        .ok()
}

fn validate_connectivity(nodes: &[Vec3], elements: &[QuadElement]) -> Result<()> {
    for (n, x) in nodes.iter().enumerate() {
        if !x.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFiniteCoordinate { node: n });
        }
    }
    let mut used = vec![false; nodes.len()];
    for (e, el) in elements.iter().enumerate() {
        for (i, &n) in el.nodes.iter().enumerate() {
            if n >= nodes.len() {
                return Err(Error::InvalidNodeRef { element: e, node: n });
            }
            if el.nodes[..i].contains(&n) {
                return Err(Error::RepeatedNode { element: e, node: n });
            }
            used[n] = true;
        }
    }
    if let Some(n) = used.iter().position(|&u| !u) {
        return Err(Error::DanglingNode { node: n });
    }
    // every edge may be shared by at most two elements
    let mut edges: Vec<(usize, usize)> = elements.iter().flat_map(element_edges).collect();
    edges.sort_unstable();
    let mut i = 0;
    while i < edges.len() {
        let mut j = i + 1;
        while j < edges.len() && edges[j] == edges[i] {
            j += 1;
        }
        if j - i > 2 {
            return Err(Error::NonManifoldCrease {
                node1: edges[i].0,
                node2: edges[i].1,
                count: j - i,
            });
        }
        i = j;
    }
    Ok(())
}

fn element_edges(el: &QuadElement) -> [(usize, usize); 4] {
    let n = el.nodes;
    core::array::from_fn(|i| {
        let (a, b) = (n[i], n[(i + 1) % 4]);
        (a.min(b), a.max(b))
    })
}

fn has_edge(el: &QuadElement, a: usize, b: usize) -> bool {
    element_edges(el).contains(&(a.min(b), a.max(b)))
}

fn validate_panels(elements: &[QuadElement]) -> Result<()> {
    let num_panels = elements.iter().map(|e| e.panel + 1).max().unwrap_or(0);
    // union-find over elements joined by edges inside one panel
    let mut parent: Vec<usize> = (0..elements.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut edges: Vec<((usize, usize), usize)> = elements
        .iter()
        .enumerate()
        .flat_map(|(e, el)| element_edges(el).map(|edge| (edge, e)))
        .collect();
    edges.sort_unstable();
    for w in edges.windows(2) {
        let ((e1, a), (e2, b)) = (w[0], w[1]);
        if e1 == e2 && elements[a].panel == elements[b].panel {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut panel_root = vec![usize::MAX; num_panels];
    for e in 0..elements.len() {
        let p = elements[e].panel;
        let r = root(&mut parent, e);
        if panel_root[p] == usize::MAX {
            panel_root[p] = r;
        } else if panel_root[p] != r {
            return Err(Error::DisconnectedPanel { panel: p });
        }
    }
    Ok(())
}

fn build_creases(
    nodes: &[Vec3],
    elements: &[QuadElement],
    specs: &[CreaseSpec],
) -> Result<Vec<CreaseSegment>> {
    let mut out = Vec::with_capacity(specs.len());
    for (c, spec) in specs.iter().enumerate() {
        let [ea, eb] = spec.elements;
        let [n1, n2] = spec.nodes;
        let invalid = |reason| Error::InvalidCrease { crease: c, reason };
        if ea >= elements.len() || eb >= elements.len() {
            return Err(invalid("element id out of range"));
        }
        if ea == eb {
            return Err(invalid("the two elements must differ"));
        }
        if elements[ea].panel == elements[eb].panel {
            return Err(invalid("the two elements must belong to different panels"));
        }
        if n1 >= nodes.len() || n2 >= nodes.len() || n1 == n2 {
            return Err(invalid("invalid endpoint nodes"));
        }
        if !has_edge(&elements[ea], n1, n2) || !has_edge(&elements[eb], n1, n2) {
            return Err(invalid("both elements must contain the crease edge"));
        }
        let length = math::norm(math::sub(nodes[n2], nodes[n1]));
        if !(length > 0.0) {
            return Err(invalid("zero rest length"));
        }
        let params = match spec.limits {
            Some((lo, hi)) => CreaseParams::new(spec.stiffness, spec.rest_angle, lo, hi),
            None => CreaseParams::with_default_limits(spec.stiffness, spec.rest_angle),
        }
        .map_err(|_| invalid("require k_f >= 0 and -pi < theta_L <= theta_0 <= theta_R < pi"))?;
        out.push(CreaseSegment {
            elem_a: ea,
            elem_b: eb,
            node1: n1,
            node2: n2,
            length,
            params,
        });
    }
    Ok(out)
}

/// Unit normal of an element from its first corner.
fn element_normal(xo: &[Vec3; 4]) -> Option<Vec3> {
    math::normalize(math::cross(math::sub(xo[1], xo[0]), math::sub(xo[3], xo[0])))
}

/// One director per `(panel, node)` incidence, sorted by node then panel.
///
/// The panel normal is taken from the lowest-numbered element of the panel;
/// every element node must reproduce it to within `1e-8` rad.
pub fn init_directors(
    nodes: &[Vec3],
    elements: &[QuadElement],
    thickness: f64,
) -> Result<Vec<DirectorSlot>> {
    let num_panels = elements.iter().map(|e| e.panel + 1).max().unwrap_or(0);
    let mut panel_normal: Vec<Option<Vec3>> = vec![None; num_panels];
    for (e, el) in elements.iter().enumerate() {
        let xo = el.nodes.map(|n| nodes[n]);
        let normal = element_normal(&xo).ok_or(Error::DegenerateElement {
            element: e,
            jacobian: 0.0,
        })?;
        let reference = *panel_normal[el.panel].get_or_insert(normal);
        for i in 0..4 {
            let prev = xo[(i + 3) % 4];
            let next = xo[(i + 1) % 4];
            let local = math::cross(math::sub(next, xo[i]), math::sub(prev, xo[i]));
            let local = math::normalize(local).ok_or(Error::DegenerateElement {
                element: e,
                jacobian: 0.0,
            })?;
            let cos = math::dot(local, reference).clamp(-1.0, 1.0);
            let sin = math::norm(math::cross(local, reference));
            let deviation = sin.atan2(cos);
            if deviation > 1e-8 {
                return Err(Error::NonFlatPanel {
                    panel: el.panel,
                    deviation,
                });
            }
        }
    }
    let mut slots: Vec<DirectorSlot> = Vec::new();
    for el in elements {
        let normal = panel_normal[el.panel].expect("panel has an element");
        for &n in &el.nodes {
            slots.push(DirectorSlot {
                panel: el.panel,
                node: n,
                director: math::scale(normal, 0.5 * thickness),
            });
        }
    }
    slots.sort_by_key(|s| (s.node, s.panel));
    slots.dedup_by(|a, b| a.node == b.node && a.panel == b.panel);
    Ok(slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn steel() -> Material {
        Material::new(1.0, 0.0, 0.01).unwrap()
    }

    fn two_quads() -> (Vec<Vec3>, Vec<[usize; 4]>) {
        let nodes = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
            [2.0, 1.0, 0.0],
        ];
        (nodes, vec![[0, 1, 4, 3], [1, 2, 5, 4]])
    }

    #[test]
    fn single_quad_mesh() {
        let nodes = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
        let mesh = Mesh::build(nodes, vec![[0, 1, 2, 3]], vec![0], &[], steel()).unwrap();
        assert_eq!(mesh.elements().len(), 1);
        assert!(mesh.creases().is_empty());
        assert_eq!(mesh.total_dofs(), 24);
        for s in mesh.director_slots() {
            assert_eq!(s.director, [0.0, 0.0, 0.005]);
        }
    }

    #[test]
    fn two_panel_crease() {
        let (nodes, quads) = two_quads();
        let crease = CreaseSpec::new([0, 1], [1, 4], 0.01, 0.0);
        let mesh = Mesh::build(nodes, quads, vec![0, 1], &[crease], steel()).unwrap();
        assert_eq!(mesh.creases().len(), 1);
        assert!((mesh.creases()[0].length - 1.0).abs() < 1e-15);
        assert_eq!(mesh.director_slots().len(), 8);
        assert_eq!(mesh.total_dofs(), 42);
        // both panels are coplanar so duplicated directors agree
        let at_1: Vec<_> = mesh.slots_at(1).map(|s| mesh.director_slots()[s].director).collect();
        assert_eq!(at_1.len(), 2);
        assert_eq!(at_1[0], at_1[1]);
    }

    #[test]
    fn dof_numbering_is_a_bijection() {
        let (nodes, quads) = two_quads();
        let crease = CreaseSpec::new([0, 1], [1, 4], 0.01, 0.0);
        let mesh = Mesh::build(nodes, quads, vec![0, 1], &[crease], steel()).unwrap();
        let mut seen = vec![false; mesh.total_dofs()];
        let map = mesh.dof_map();
        for n in 0..mesh.nodes().len() {
            for d in map.translation(n) {
                assert!(!core::mem::replace(&mut seen[d], true));
            }
        }
        for s in 0..mesh.director_slots().len() {
            for d in map.director(s) {
                assert!(!core::mem::replace(&mut seen[d], true));
            }
        }
        assert!(seen.iter().all(|&s| s));
        // crease nodes carry 3 + 3k dofs
        assert_eq!(mesh.slots_at(1).count(), 2);
        assert_eq!(mesh.slots_at(0).count(), 1);
    }

    #[test]
    fn rebuild_is_deterministic() {
        let (nodes, quads) = two_quads();
        let crease = CreaseSpec::new([0, 1], [1, 4], 0.01, 0.0);
        let a = Mesh::build(nodes.clone(), quads.clone(), vec![0, 1], &[crease], steel()).unwrap();
        let b = Mesh::build(nodes, quads, vec![0, 1], &[crease], steel()).unwrap();
        assert_eq!(a.dof_map(), b.dof_map());
    }

    #[test]
    fn rejects_bad_topology() {
        let (mut nodes, quads) = two_quads();
        nodes.push([5.0, 5.0, 0.0]);
        assert_eq!(
            Mesh::build(nodes, quads.clone(), vec![0, 0], &[], steel()).unwrap_err(),
            Error::DanglingNode { node: 6 }
        );

        let (nodes, _) = two_quads();
        let err = Mesh::build(nodes, vec![[0, 1, 4, 9]], vec![0], &[], steel()).unwrap_err();
        assert_eq!(err, Error::InvalidNodeRef { element: 0, node: 9 });

        // three elements on one edge
        let mut nodes = two_quads().0;
        nodes.push([1.0, 0.5, 1.0]);
        nodes.push([1.0, 1.0, 1.0]);
        let quads = vec![[0, 1, 4, 3], [1, 2, 5, 4], [1, 4, 7, 6]];
        let err = Mesh::build(nodes, quads, vec![0, 1, 2], &[], steel()).unwrap_err();
        assert!(matches!(err, Error::NonManifoldCrease { node1: 1, node2: 4, count: 3 }));

        // collapsed quad
        let nodes = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [3.0, 0.0, 0.0]];
        let err = Mesh::build(nodes, vec![[0, 1, 2, 3]], vec![0], &[], steel()).unwrap_err();
        assert!(matches!(err, Error::DegenerateElement { .. }));
    }

    #[test]
    fn rejects_non_flat_panel() {
        let mut nodes = two_quads().0;
        nodes[2][2] = 0.3;
        let err = Mesh::build(nodes, two_quads().1, vec![0, 0], &[], steel()).unwrap_err();
        assert!(matches!(err, Error::NonFlatPanel { panel: 0, .. }));
    }

    #[test]
    fn rejects_invalid_crease() {
        let (nodes, quads) = two_quads();
        let same_panel = CreaseSpec::new([0, 1], [1, 4], 0.01, 0.0);
        let err = Mesh::build(nodes.clone(), quads.clone(), vec![0, 0], &[same_panel], steel());
        assert!(matches!(err, Err(Error::InvalidCrease { crease: 0, .. })));

        let off_edge = CreaseSpec::new([0, 1], [0, 4], 0.01, 0.0);
        let err = Mesh::build(nodes.clone(), quads.clone(), vec![0, 1], &[off_edge], steel());
        assert!(matches!(err, Err(Error::InvalidCrease { crease: 0, .. })));

        let mut bad_limits = CreaseSpec::new([0, 1], [1, 4], 0.01, 0.5);
        bad_limits.limits = Some((0.6, 1.0));
        let err = Mesh::build(nodes, quads, vec![0, 1], &[bad_limits], steel());
        assert!(matches!(err, Err(Error::InvalidCrease { crease: 0, .. })));
    }

    #[test]
    fn rejects_disconnected_panel() {
        let nodes = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
            [3.0, 0.0, 0.0],
            [4.0, 0.0, 0.0],
            [4.0, 1.0, 0.0],
            [3.0, 1.0, 0.0],
        ];
        let err = Mesh::build(nodes, vec![[0, 1, 2, 3], [4, 5, 6, 7]], vec![0, 0], &[], steel());
        assert_eq!(err.unwrap_err(), Error::DisconnectedPanel { panel: 0 });
    }

    #[test]
    fn material_validation() {
        assert!(Material::new(-1.0, 0.3, 0.1).is_err());
        assert!(Material::new(1.0, 0.5, 0.1).is_err());
        assert!(Material::new(1.0, 0.3, 0.0).is_err());
        let m = Material::new(12e9, 0.3, 0.01).unwrap();
        assert!((m.bending_rigidity() - 12e9 * 1e-6 / (12.0 * 0.91)).abs() < 1e-9);
    }
}
