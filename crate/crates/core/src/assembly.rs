//! Global internal force and tangent stiffness, and boundary-condition
//! bookkeeping.

use alloc::vec;
use alloc::vec::Vec;

use crate::crease::{crease_contribution, CreaseResponse};
use crate::element::{ElementKernel, ElementResponse, EnergyParts};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::sparse::CsrMatrix;

/// Homogeneous fixed DOFs, prescribed DOFs with their total displacement,
/// and nodal forces at full load.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryConditions {
    pub fixed: Vec<usize>,
    pub prescribed: Vec<(usize, f64)>,
    pub forces: Vec<(usize, f64)>,
}

impl BoundaryConditions {
    pub fn external_force(&self, total_dofs: usize) -> Vec<f64> {
        let mut f = vec![0.0; total_dofs];
        for &(d, v) in &self.forces {
            f[d] += v;
        }
        f
    }

    /// Total prescribed displacement as a full-length vector.
    pub fn loaded_displacement(&self, total_dofs: usize) -> Vec<f64> {
        let mut u = vec![0.0; total_dofs];
        for &(d, v) in &self.prescribed {
            u[d] = v;
        }
        u
    }
}

/// Sorted DOFs that are neither fixed nor prescribed.
pub fn partition_free_dofs(bcs: &BoundaryConditions, total_dofs: usize) -> Result<Vec<usize>> {
    let out_of_range = Error::InvalidParameter {
        name: "boundary conditions",
        reason: "DOF index out of range",
    };
    let mut state = vec![0u8; total_dofs];
    for &d in &bcs.fixed {
        *state.get_mut(d).ok_or(out_of_range.clone())? = 1;
    }
    for &(d, _) in &bcs.prescribed {
        let s = state.get_mut(d).ok_or(out_of_range.clone())?;
        if *s != 0 {
            return Err(Error::OverlappingBcs { dof: d });
        }
        *s = 2;
    }
    if bcs.forces.iter().any(|&(d, _)| d >= total_dofs) {
        return Err(out_of_range);
    }
    Ok((0..total_dofs).filter(|&d| state[d] == 0).collect())
}

#[derive(Debug, Clone)]
pub struct GlobalSystem {
    pub energy: f64,
    pub crease_energy: f64,
    pub internal_force: Vec<f64>,
    pub stiffness: CsrMatrix,
}

/// Per-mesh assembly plan: element kernels, the stiffness pattern and the
/// scatter positions of every element and crease block.
#[derive(Debug, Clone)]
pub struct Assembler<'m> {
    mesh: &'m Mesh,
    kernels: Vec<ElementKernel>,
    pattern: CsrMatrix,
    element_dofs: Vec<[usize; 24]>,
    element_pos: Vec<Vec<usize>>,
    crease_dofs: Vec<[usize; 12]>,
    crease_pos: Vec<Vec<usize>>,
}

impl<'m> Assembler<'m> {
    pub fn new(mesh: &'m Mesh) -> Result<Self> {
        let kernels = (0..mesh.elements().len())
            .map(|e| {
                let (xo, xn) = mesh.element_geometry(e);
                ElementKernel::new(e, &xo, &xn, mesh.material())
            })
            .collect::<Result<Vec<_>>>()?;
        let element_dofs: Vec<[usize; 24]> = (0..mesh.elements().len()).map(|e| mesh.element_dofs(e)).collect();
        let crease_dofs: Vec<[usize; 12]> = (0..mesh.creases().len()).map(|c| mesh.crease_dofs(c)).collect();
        let pattern = CsrMatrix::from_groups(
            mesh.total_dofs(),
            element_dofs
                .iter()
                .map(|d| d.as_slice())
                .chain(crease_dofs.iter().map(|d| d.as_slice())),
        );
        let element_pos = element_dofs.iter().map(|d| pattern.block_positions(d)).collect();
        let crease_pos = crease_dofs.iter().map(|d| pattern.block_positions(d)).collect();
        Ok(Assembler {
            mesh,
            kernels,
            pattern,
            element_dofs,
            element_pos,
            crease_dofs,
            crease_pos,
        })
    }

    pub fn mesh(&self) -> &'m Mesh {
        self.mesh
    }

    pub fn kernel(&self, element: usize) -> &ElementKernel {
        &self.kernels[element]
    }

    /// An all-zero matrix with the assembly pattern.
    pub fn pattern(&self) -> &CsrMatrix {
        &self.pattern
    }

    fn gather<const N: usize>(dofs: &[usize; N], u: &[f64]) -> [f64; N] {
        dofs.map(|d| u[d])
    }

    #[cfg(feature = "parallel")]
    fn element_responses(&self, u: &[f64]) -> Vec<ElementResponse> {
        use rayon::prelude::*;
        (0..self.kernels.len())
            .into_par_iter()
            .map(|e| self.kernels[e].force_stiffness(&Self::gather(&self.element_dofs[e], u)))
            .collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn element_responses(&self, u: &[f64]) -> Vec<ElementResponse> {
        (0..self.kernels.len())
            .map(|e| self.kernels[e].force_stiffness(&Self::gather(&self.element_dofs[e], u)))
            .collect()
    }

    fn crease_responses(&self, u: &[f64]) -> Result<Vec<CreaseResponse>> {
        (0..self.crease_dofs.len())
            .map(|c| crease_contribution(self.mesh, c, u))
            .collect()
    }

    /// Internal force and tangent at `u`. Contributions are summed in
    /// element order, then crease order, regardless of threading.
    pub fn assemble(&self, u: &[f64]) -> Result<GlobalSystem> {
        let mut k = self.pattern.clone();
        let mut f = vec![0.0; self.mesh.total_dofs()];
        let mut energy = 0.0;
        for (e, r) in self.element_responses(u).iter().enumerate() {
            energy += r.energy;
            let dofs = &self.element_dofs[e];
            let pos = &self.element_pos[e];
            for i in 0..24 {
                f[dofs[i]] += r.gradient[i];
                for j in 0..24 {
                    k.values[pos[24 * i + j]] += r.hessian[i][j];
                }
            }
        }
        let mut crease_energy = 0.0;
        for (c, r) in self.crease_responses(u)?.iter().enumerate() {
            crease_energy += r.energy;
            let dofs = &self.crease_dofs[c];
            let pos = &self.crease_pos[c];
            for i in 0..12 {
                f[dofs[i]] += r.gradient[i];
                for j in 0..12 {
                    k.values[pos[12 * i + j]] += r.hessian[i][j];
                }
            }
        }
        Ok(GlobalSystem {
            energy: energy + crease_energy,
            crease_energy,
            internal_force: f,
            stiffness: k,
        })
    }

    /// Total energy and internal force without the tangent.
    pub fn internal_force(&self, u: &[f64]) -> Result<(f64, Vec<f64>)> {
        let mut f = vec![0.0; self.mesh.total_dofs()];
        let mut energy = 0.0;
        for (e, kernel) in self.kernels.iter().enumerate() {
            let dofs = &self.element_dofs[e];
            let (w, g) = kernel.gradient(&Self::gather(dofs, u));
            energy += w;
            for i in 0..24 {
                f[dofs[i]] += g[i];
            }
        }
        for (c, r) in self.crease_responses(u)?.iter().enumerate() {
            energy += r.energy;
            for i in 0..12 {
                f[self.crease_dofs[c][i]] += r.gradient[i];
            }
        }
        Ok((energy, f))
    }

    pub fn energy(&self, u: &[f64]) -> Result<f64> {
        let elements: f64 = self.element_energies(u).iter().map(|p| p.total()).sum();
        Ok(elements + self.crease_energy(u)?)
    }

    /// Strain energy of every element split by strain family.
    pub fn element_energies(&self, u: &[f64]) -> Vec<EnergyParts> {
        self.kernels
            .iter()
            .zip(&self.element_dofs)
            .map(|(k, d)| k.energy_parts(&Self::gather(d, u)))
            .collect()
    }

    pub fn crease_energy(&self, u: &[f64]) -> Result<f64> {
        Ok(self.crease_responses(u)?.iter().map(|r| r.energy).sum())
    }

    /// Bending part of the element energy summed over `elements`.
    pub fn bending_energy(&self, u: &[f64], elements: &[usize]) -> f64 {
        elements
            .iter()
            .map(|&e| self.kernels[e].energy_parts(&Self::gather(&self.element_dofs[e], u)).bending)
            .sum()
    }
}

/// One-shot assembly; prefer [`Assembler`] when assembling repeatedly.
pub fn assemble(mesh: &Mesh, u: &[f64]) -> Result<GlobalSystem> {
    Assembler::new(mesh)?.assemble(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{CreaseSpec, Material};

    fn creased_pair() -> Mesh {
        let nodes = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [2.0, 0.0, 0.1],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
            [2.0, 1.0, 0.1],
        ];
        let crease = CreaseSpec::new([0, 1], [1, 4], 0.5, 0.0);
        let quads = vec![[0, 1, 4, 3], [1, 2, 5, 4]];
        Mesh::build(nodes, quads, vec![0, 1], &[crease], Material::new(100.0, 0.3, 0.05).unwrap()).unwrap()
    }

    fn state(n: usize, seed: u64, scale: f64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                scale * (((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5)
            })
            .collect()
    }

    #[test]
    fn free_dofs() {
        let bcs = BoundaryConditions::default();
        assert_eq!(partition_free_dofs(&bcs, 4).unwrap(), vec![0, 1, 2, 3]);
        let bcs = BoundaryConditions {
            fixed: vec![0, 2],
            prescribed: vec![(3, 1.0)],
            forces: vec![],
        };
        assert_eq!(partition_free_dofs(&bcs, 5).unwrap(), vec![1, 4]);
        let bcs = BoundaryConditions {
            fixed: vec![0, 1, 2],
            ..Default::default()
        };
        assert!(partition_free_dofs(&bcs, 3).unwrap().is_empty());
        let bad = BoundaryConditions {
            fixed: vec![1],
            prescribed: vec![(1, 0.5)],
            forces: vec![],
        };
        assert_eq!(partition_free_dofs(&bad, 3).unwrap_err(), Error::OverlappingBcs { dof: 1 });
    }

    #[test]
    fn reference_state_is_in_equilibrium() {
        // the second panel is tilted, so its crease rest angle is not zero;
        // use a coplanar pair instead
        let nodes = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
            [2.0, 1.0, 0.0],
        ];
        let crease = CreaseSpec::new([0, 1], [1, 4], 0.5, 0.0);
        let mesh = Mesh::build(
            nodes,
            vec![[0, 1, 4, 3], [1, 2, 5, 4]],
            vec![0, 1],
            &[crease],
            Material::new(100.0, 0.3, 0.05).unwrap(),
        )
        .unwrap();
        let sys = assemble(&mesh, &vec![0.0; mesh.total_dofs()]).unwrap();
        assert!(sys.internal_force.iter().all(|f| f.abs() < 1e-15));
        assert_eq!(sys.energy, 0.0);
    }

    #[test]
    fn tangent_matches_force_differences() {
        let mesh = creased_pair();
        let a = Assembler::new(&mesh).unwrap();
        let n = mesh.total_dofs();
        let u = state(n, 5, 0.01);
        let sys = a.assemble(&u).unwrap();
        assert!(sys.stiffness.asymmetry() < 1e-12);
        let (e, f) = a.internal_force(&u).unwrap();
        assert!((e - sys.energy).abs() < 1e-14 * e.abs().max(1e-300));
        let h = 1e-6;
        for j in 0..n {
            let (mut up, mut um) = (u.clone(), u.clone());
            up[j] += h;
            um[j] -= h;
            let fp = a.internal_force(&up).unwrap().1;
            let fm = a.internal_force(&um).unwrap().1;
            let ep = a.energy(&up).unwrap();
            let em = a.energy(&um).unwrap();
            assert!(((ep - em) / (2.0 * h) - f[j]).abs() < 1e-6 * (1.0 + f[j].abs()));
            for i in 0..n {
                let fd = (fp[i] - fm[i]) / (2.0 * h);
                let k = sys.stiffness.get(i, j);
                assert!((fd - k).abs() < 1e-5 * (1.0 + k.abs()), "{i} {j} {fd} {k}");
            }
        }
    }

    #[test]
    fn translation_leaves_force_zero() {
        let mesh = creased_pair();
        let a = Assembler::new(&mesh).unwrap();
        let mut u = vec![0.0; mesh.total_dofs()];
        for n in 0..mesh.nodes().len() {
            for (c, d) in mesh.dof_map().translation(n).iter().enumerate() {
                u[*d] = [0.3, -2.0, 1.1][c];
            }
        }
        let sys0 = a.assemble(&vec![0.0; mesh.total_dofs()]).unwrap();
        let sys = a.assemble(&u).unwrap();
        for (f, f0) in sys.internal_force.iter().zip(&sys0.internal_force) {
            assert!((f - f0).abs() < 1e-12);
        }
    }
}
