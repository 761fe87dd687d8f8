//! Linear elastic law, pre-integrated through the thickness.

use crate::mesh::Material;

/// Thickness-integrated stiffness blocks in the local Cartesian frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratedConstitutive {
    pub c_m: [[f64; 3]; 3],
    pub c_b: [[f64; 3]; 3],
    pub c_s: [[f64; 2]; 2],
    pub c_t: f64,
}

/// Plane-stress in-plane law.
pub fn plane_stress(m: &Material) -> [[f64; 3]; 3] {
    let nu = m.poisson_ratio;
    let f = m.youngs_modulus / (1.0 - nu * nu);
    [[f, f * nu, 0.0], [f * nu, f, 0.0], [0.0, 0.0, f * 0.5 * (1.0 - nu)]]
}

/// Transverse shear modulus with the 5/6 correction.
pub fn corrected_shear_modulus(m: &Material) -> f64 {
    5.0 / 6.0 * m.youngs_modulus / (2.0 * (1.0 + m.poisson_ratio))
}

pub fn integrated_constitutive(m: &Material) -> IntegratedConstitutive {
    let c = plane_stress(m);
    let g = corrected_shear_modulus(m);
    IntegratedConstitutive {
        c_m: c.map(|row| row.map(|v| 2.0 * v)),
        c_b: c.map(|row| row.map(|v| 2.0 / 3.0 * v)),
        c_s: [[2.0 * g, 0.0], [0.0, 2.0 * g]],
        c_t: 2.0 * m.youngs_modulus,
    }
}

impl IntegratedConstitutive {
    /// Block-diagonal 9x9 matrix in the strain order membrane, bending,
    /// shear, thickness.
    pub fn block_matrix(&self) -> [[f64; 9]; 9] {
        let mut c = [[0.0; 9]; 9];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = self.c_m[i][j];
                c[3 + i][3 + j] = self.c_b[i][j];
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                c[6 + i][6 + j] = self.c_s[i][j];
            }
        }
        c[8][8] = self.c_t;
        c
    }
}
