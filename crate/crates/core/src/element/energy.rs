//! Element strain energy with its exact gradient and Hessian.

use crate::element::constitutive::integrated_constitutive;
use crate::element::frame::{local_basis, transform_matrices, CosineTable};
use crate::element::shape::{shape_functions, GAUSS_2X2};
use crate::element::strain::{self, Form, BENDING, MEMBRANE, NUM_STRAINS, SHEAR, THICKNESS};
use crate::error::{Error, Result};
use crate::math::{self, Vec3};
use crate::mesh::Material;

/// Local Cartesian strains at one quadrature point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrainState {
    /// `(e_xx, e_yy, 2e_xy)` of the mid-surface.
    pub membrane: [f64; 3],
    /// Thickness-linear part of the in-plane strains.
    pub bending: [f64; 3],
    /// `(g_zx, g_zy)`.
    pub shear: [f64; 2],
    pub thickness: f64,
}

impl StrainState {
    fn from_vector(e: &[f64; NUM_STRAINS]) -> Self {
        StrainState {
            membrane: MEMBRANE.map(|k| e[k]),
            bending: BENDING.map(|k| e[k]),
            shear: SHEAR.map(|k| e[k]),
            thickness: e[THICKNESS],
        }
    }
}

/// Element energy split by strain family.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EnergyParts {
    pub membrane: f64,
    pub bending: f64,
    pub shear: f64,
    pub thickness: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.membrane + self.bending + self.shear + self.thickness
    }
}

impl core::ops::AddAssign for EnergyParts {
    fn add_assign(&mut self, o: Self) {
        self.membrane += o.membrane;
        self.bending += o.bending;
        self.shear += o.shear;
        self.thickness += o.thickness;
    }
}

#[derive(Debug, Clone)]
struct QuadraturePoint {
    /// Local Cartesian strain forms.
    forms: [Form; NUM_STRAINS],
    /// Gauss weight times `J_o`.
    weight: f64,
}

/// Energy, gradient and Hessian with respect to the 24 element DOFs.
#[derive(Debug, Clone)]
pub struct ElementResponse {
    pub energy: f64,
    pub gradient: [f64; 24],
    pub hessian: [[f64; 24]; 24],
}

/// Everything about an element that depends only on its reference state:
/// strain forms already rotated to the local frame, quadrature weights and
/// the integrated constitutive matrix.
#[derive(Debug, Clone)]
pub struct ElementKernel {
    reference: [Vec3; 8],
    points: [QuadraturePoint; 4],
    c: [[f64; NUM_STRAINS]; NUM_STRAINS],
}

impl ElementKernel {
    /// `element` only labels errors.
    pub fn new(element: usize, xo: &[Vec3; 4], xn: &[Vec3; 4], material: &Material) -> Result<Self> {
        let frame = local_basis(xo).ok_or(Error::DegenerateElement {
            element,
            jacobian: 0.0,
        })?;
        let build = |&(xi, eta, w): &(f64, f64, f64)| -> Result<QuadraturePoint> {
            let sf = shape_functions(xi, eta);
            let (mut gxi, mut geta, mut gz) = ([0.0; 3], [0.0; 3], [0.0; 3]);
            for i in 0..4 {
                gxi = math::axpy(gxi, sf.dxi[i], xo[i]);
                geta = math::axpy(geta, sf.deta[i], xo[i]);
                gz = math::axpy(gz, sf.n[i], xn[i]);
            }
            let jacobian = math::dot(math::cross(gxi, geta), gz);
            if !(jacobian > 0.0) {
                return Err(Error::DegenerateElement { element, jacobian });
            }
            let t = transform_matrices(&CosineTable::new(&frame, gxi, geta, gz))
                .ok_or(Error::SingularTransform { element })?;
            let nat = strain::natural_forms(xi, eta);
            let mix = |rows: &[f64], src: &[usize]| -> Form {
                let mut s = [[0.0; 8]; 8];
                for (&w, &k) in rows.iter().zip(src) {
                    for a in 0..8 {
                        for b in 0..8 {
                            s[a][b] += w * nat[k][a][b];
                        }
                    }
                }
                s
            };
            let forms = [
                mix(&t.t_eps[0], &MEMBRANE),
                mix(&t.t_eps[1], &MEMBRANE),
                mix(&t.t_eps[2], &MEMBRANE),
                mix(&t.t_eps[0], &BENDING),
                mix(&t.t_eps[1], &BENDING),
                mix(&t.t_eps[2], &BENDING),
                mix(&t.t_gamma[0], &SHEAR),
                mix(&t.t_gamma[1], &SHEAR),
                mix(&[t.t_zeta], &[THICKNESS]),
            ];
            Ok(QuadraturePoint {
                forms,
                weight: w * jacobian,
            })
        };
        let points = [
            build(&GAUSS_2X2[0])?,
            build(&GAUSS_2X2[1])?,
            build(&GAUSS_2X2[2])?,
            build(&GAUSS_2X2[3])?,
        ];
        Ok(ElementKernel {
            reference: strain::vector_nodes(xo, xn),
            points,
            c: integrated_constitutive(material).block_matrix(),
        })
    }

    fn strain_vectors(&self, u: &[f64; 24]) -> [[f64; NUM_STRAINS]; 4] {
        let g = strain::gram_change(&self.reference, &strain::split(u));
        core::array::from_fn(|q| core::array::from_fn(|k| strain::contract(&self.points[q].forms[k], &g)))
    }

    /// Local Cartesian strains at the four Gauss points.
    pub fn strains(&self, u: &[f64; 24]) -> [StrainState; 4] {
        let e = self.strain_vectors(u);
        e.map(|v| StrainState::from_vector(&v))
    }

    pub fn energy_parts(&self, u: &[f64; 24]) -> EnergyParts {
        let e = self.strain_vectors(u);
        let mut parts = EnergyParts::default();
        for (q, ev) in e.iter().enumerate() {
            let w = 0.5 * self.points[q].weight;
            let block = |idx: &[usize]| -> f64 {
                let mut s = 0.0;
                for &i in idx {
                    for &j in idx {
                        s += ev[i] * self.c[i][j] * ev[j];
                    }
                }
                w * s
            };
            parts.membrane += block(&MEMBRANE);
            parts.bending += block(&BENDING);
            parts.shear += block(&SHEAR);
            parts.thickness += block(&[THICKNESS]);
        }
        parts
    }

    pub fn energy(&self, u: &[f64; 24]) -> f64 {
        self.energy_parts(u).total()
    }

    fn stress(&self, e: &[f64; NUM_STRAINS]) -> [f64; NUM_STRAINS] {
        core::array::from_fn(|k| (0..NUM_STRAINS).map(|l| self.c[k][l] * e[l]).sum())
    }

    /// Strain gradients `de_k/du` at one point: `2 sum_b S_ab x_b`.
    fn strain_gradients(forms: &[Form; NUM_STRAINS], x: &[Vec3; 8]) -> [[f64; 24]; NUM_STRAINS] {
        core::array::from_fn(|k| {
            let mut g = [0.0; 24];
            for a in 0..8 {
                let mut v = [0.0; 3];
                for b in 0..8 {
                    v = math::axpy(v, forms[k][a][b], x[b]);
                }
                g[3 * a] = 2.0 * v[0];
                g[3 * a + 1] = 2.0 * v[1];
                g[3 * a + 2] = 2.0 * v[2];
            }
            g
        })
    }

    pub fn gradient(&self, u: &[f64; 24]) -> (f64, [f64; 24]) {
        let x = strain::displaced(&self.reference, u);
        let e = self.strain_vectors(u);
        let mut energy = 0.0;
        let mut grad = [0.0; 24];
        for (q, p) in self.points.iter().enumerate() {
            let sigma = self.stress(&e[q]);
            energy += 0.5 * p.weight * (0..NUM_STRAINS).map(|k| e[q][k] * sigma[k]).sum::<f64>();
            let gk = Self::strain_gradients(&p.forms, &x);
            for k in 0..NUM_STRAINS {
                let s = p.weight * sigma[k];
                for i in 0..24 {
                    grad[i] += s * gk[k][i];
                }
            }
        }
        (energy, grad)
    }

    pub fn force_stiffness(&self, u: &[f64; 24]) -> ElementResponse {
        let x = strain::displaced(&self.reference, u);
        let e = self.strain_vectors(u);
        let mut out = ElementResponse {
            energy: 0.0,
            gradient: [0.0; 24],
            hessian: [[0.0; 24]; 24],
        };
        for (q, p) in self.points.iter().enumerate() {
            let sigma = self.stress(&e[q]);
            let w = p.weight;
            out.energy += 0.5 * w * (0..NUM_STRAINS).map(|k| e[q][k] * sigma[k]).sum::<f64>();
            let gk = Self::strain_gradients(&p.forms, &x);
            // C g, weighted
            let cg: [[f64; 24]; NUM_STRAINS] = core::array::from_fn(|k| {
                let mut v = [0.0; 24];
                for l in 0..NUM_STRAINS {
                    let c = w * self.c[k][l];
                    if c != 0.0 {
                        for i in 0..24 {
                            v[i] += c * gk[l][i];
                        }
                    }
                }
                v
            });
            for k in 0..NUM_STRAINS {
                let s = w * sigma[k];
                for i in 0..24 {
                    out.gradient[i] += s * gk[k][i];
                }
                for i in 0..24 {
                    let gi = gk[k][i];
                    if gi != 0.0 {
                        let row = &mut out.hessian[i];
                        for j in 0..24 {
                            row[j] += gi * cg[k][j];
                        }
                    }
                }
            }
            // stress-dependent part: 2 (sum_k sigma_k S_k)_ab I
            for a in 0..8 {
                for b in 0..8 {
                    let mut s = 0.0;
                    for k in 0..NUM_STRAINS {
                        s += sigma[k] * p.forms[k][a][b];
                    }
                    let s = 2.0 * w * s;
                    for c in 0..3 {
                        out.hessian[3 * a + c][3 * b + c] += s;
                    }
                }
            }
        }
        out
    }
}

/// Convenience wrapper building a kernel for a single evaluation.
pub fn element_energy(xo: &[Vec3; 4], xn: &[Vec3; 4], material: &Material, u: &[f64; 24]) -> Result<f64> {
    Ok(ElementKernel::new(0, xo, xn, material)?.energy(u))
}

pub fn element_force_stiffness(
    xo: &[Vec3; 4],
    xn: &[Vec3; 4],
    material: &Material,
    u: &[f64; 24],
) -> Result<ElementResponse> {
    Ok(ElementKernel::new(0, xo, xn, material)?.force_stiffness(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::shape::CORNERS;

    fn square(h: f64) -> ([Vec3; 4], [Vec3; 4]) {
        (CORNERS.map(|(x, y)| [0.5 * x, 0.5 * y, 0.0]), [[0.0, 0.0, 0.5 * h]; 4])
    }

    fn distorted(h: f64) -> ([Vec3; 4], [Vec3; 4]) {
        (
            [[0.0, 0.0, 0.0], [1.2, 0.1, 0.0], [1.0, 0.9, 0.0], [-0.15, 1.1, 0.0]],
            [[0.0, 0.0, 0.5 * h]; 4],
        )
    }

    fn pseudo_random(seed: u64, scale: f64) -> [f64; 24] {
        let mut s = seed;
        core::array::from_fn(|_| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            scale * (((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5)
        })
    }

    #[test]
    fn uniaxial_stretch_energy() {
        let h = 0.01;
        let (xo, xn) = square(h);
        let m = Material::new(1.0, 0.0, h).unwrap();
        let mut u = [0.0; 24];
        for a in 0..4 {
            u[3 * a] = 0.01 * xo[a][0];
        }
        let eps = 0.01 + 0.5 * 0.01 * 0.01;
        // C_m(1,1) = 2, J_o = h/2 per unit natural area, natural area 4 maps to 1
        let expected = 0.5 * 2.0 * eps * eps * (h / 2.0);
        let k = ElementKernel::new(0, &xo, &xn, &m).unwrap();
        let parts = k.energy_parts(&u);
        assert!((parts.membrane - expected).abs() < 1e-14 * expected);
        assert!(parts.bending.abs() < 1e-25 && parts.shear.abs() < 1e-25);
        let s = k.strains(&u);
        for q in 0..4 {
            assert!((s[q].membrane[0] - eps).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_state_is_unstressed() {
        let (xo, xn) = distorted(0.05);
        let m = Material::new(3.0, 0.25, 0.05).unwrap();
        let r = element_force_stiffness(&xo, &xn, &m, &[0.0; 24]).unwrap();
        assert_eq!(r.energy, 0.0);
        assert!(r.gradient.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn gradient_and_hessian_match_differences() {
        let (xo, xn) = distorted(0.05);
        let m = Material::new(3.0, 0.25, 0.05).unwrap();
        let k = ElementKernel::new(0, &xo, &xn, &m).unwrap();
        let u = pseudo_random(7, 0.02);
        let r = k.force_stiffness(&u);
        let h = 1e-6;
        for i in 0..24 {
            let (mut p, mut n) = (u, u);
            p[i] += h;
            n[i] -= h;
            let fd = (k.energy(&p) - k.energy(&n)) / (2.0 * h);
            assert!((fd - r.gradient[i]).abs() < 1e-6 * (1.0 + r.gradient[i].abs()), "{i}");
            let gp = k.gradient(&p).1;
            let gn = k.gradient(&n).1;
            for j in 0..24 {
                let fd = (gp[j] - gn[j]) / (2.0 * h);
                assert!((fd - r.hessian[j][i]).abs() < 1e-5 * (1.0 + r.hessian[j][i].abs()));
            }
        }
        for i in 0..24 {
            for j in 0..24 {
                assert!((r.hessian[i][j] - r.hessian[j][i]).abs() < 1e-12 * (1.0 + r.hessian[i][j].abs()));
            }
        }
    }

    #[test]
    fn quartic_terms_are_present() {
        let (xo, xn) = square(0.1);
        let m = Material::new(1.0, 0.3, 0.1).unwrap();
        let k = ElementKernel::new(0, &xo, &xn, &m).unwrap();
        let u = pseudo_random(3, 0.2);
        let u2 = u.map(|v| 2.0 * v);
        assert!((k.energy(&u2) - 4.0 * k.energy(&u)).abs() > 1e-6 * k.energy(&u));
    }

    #[test]
    fn parts_sum_to_total() {
        let (xo, xn) = distorted(0.05);
        let m = Material::new(3.0, 0.25, 0.05).unwrap();
        let k = ElementKernel::new(0, &xo, &xn, &m).unwrap();
        let u = pseudo_random(11, 0.05);
        let (e, _) = k.gradient(&u);
        assert!((k.energy_parts(&u).total() - e).abs() < 1e-13 * e);
    }

    #[test]
    fn rejects_inverted_director() {
        let (xo, _) = square(0.1);
        let m = Material::new(1.0, 0.3, 0.1).unwrap();
        let err = ElementKernel::new(4, &xo, &[[0.0, 0.0, -0.05]; 4], &m).unwrap_err();
        assert!(matches!(err, Error::DegenerateElement { element: 4, .. }));
    }
}
