//! Local Cartesian frame of a flat element and the natural-to-local strain
//! transformations.

use crate::math::{self, Vec3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    pub ex: Vec3,
    pub ey: Vec3,
    pub ez: Vec3,
}

/// `e_x` along the first edge, `e_z` normal to the element, `e_y = e_z x e_x`.
pub fn local_basis(xo: &[Vec3; 4]) -> Option<LocalFrame> {
    let ex = math::normalize(math::sub(xo[1], xo[0]))?;
    let ez = math::normalize(math::cross(ex, math::sub(xo[3], xo[0])))?;
    let ey = math::cross(ez, ex);
    Some(LocalFrame { ex, ey, ez })
}

/// Components of the natural basis `(X_o,xi, X_o,eta, X_n)` in a local frame.
/// Row `i` holds the components of the `i`-th natural vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineTable {
    pub xi: Vec3,
    pub eta: Vec3,
    pub zeta: Vec3,
}

impl CosineTable {
    pub fn new(frame: &LocalFrame, g_xi: Vec3, g_eta: Vec3, g_zeta: Vec3) -> Self {
        let comp = |v: Vec3| [math::dot(v, frame.ex), math::dot(v, frame.ey), math::dot(v, frame.ez)];
        CosineTable {
            xi: comp(g_xi),
            eta: comp(g_eta),
            zeta: comp(g_zeta),
        }
    }
}

/// Maps natural strains to local Cartesian ones:
/// `(e_xx, e_yy, 2e_xy) = T_eps (e_xixi, e_etaeta, 2e_xieta)`,
/// `(g_zx, g_zy) = T_gamma (g_zetaxi, g_zetaeta)`, `e_zz = T_zeta e_zetazeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transforms {
    pub t_eps: [[f64; 3]; 3],
    pub t_gamma: [[f64; 2]; 2],
    pub t_zeta: f64,
}

pub fn transform_matrices(c: &CosineTable) -> Option<Transforms> {
    let [xx, xy, _] = c.xi;
    let [ex, ey, _] = c.eta;
    let cz = c.zeta[2];
    let forward = [
        [xx * xx, xy * xy, xx * xy],
        [ex * ex, ey * ey, ex * ey],
        [2.0 * xx * ex, 2.0 * xy * ey, xx * ey + xy * ex],
    ];
    let t_eps = math::inv3(forward)?;
    let t_gamma = math::inv2([[cz * xx, cz * xy], [cz * ex, cz * ey]])?;
    let zz = cz * cz;
    if !(zz > 0.0) || !zz.is_finite() {
        return None;
    }
    Some(Transforms {
        t_eps,
        t_gamma,
        t_zeta: 1.0 / zz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_frame() {
        let xo = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
        let f = local_basis(&xo).unwrap();
        assert_eq!(f.ex, [1.0, 0.0, 0.0]);
        assert_eq!(f.ey, [0.0, 1.0, 0.0]);
        assert_eq!(f.ez, [0.0, 0.0, 1.0]);
        let h = 0.01;
        let c = CosineTable::new(&f, [0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, h / 2.0]);
        assert_eq!(c.zeta, [0.0, 0.0, h / 2.0]);
        let t = transform_matrices(&c).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 4.0 } else { 0.0 };
                assert!((t.t_eps[i][j] - want).abs() < 1e-14);
            }
        }
        assert!((t.t_zeta - 4.0 / (h * h)).abs() < 1e-9 * t.t_zeta);
    }

    #[test]
    fn identity_when_natural_basis_is_local() {
        let f = LocalFrame {
            ex: [1.0, 0.0, 0.0],
            ey: [0.0, 1.0, 0.0],
            ez: [0.0, 0.0, 1.0],
        };
        let c = CosineTable::new(&f, f.ex, f.ey, f.ez);
        let t = transform_matrices(&c).unwrap();
        assert_eq!(t.t_eps, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        assert_eq!(t.t_gamma, [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(t.t_zeta, 1.0);
    }

    #[test]
    fn collapsed_basis_is_singular() {
        let f = local_basis(&[[0.0; 3], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let c = CosineTable::new(&f, [1.0, 0.0, 0.0], [2.0, 0.0, 0.0], [0.0, 0.0, 1.0]);
        assert!(transform_matrices(&c).is_none());
    }

    #[test]
    fn rotated_element_keeps_its_cosines() {
        let xo = [[0.0, 0.0, 0.0], [2.0, 0.2, 0.0], [1.8, 1.5, 0.0], [-0.1, 1.0, 0.0]];
        let r = math::rotation(math::normalize([0.3, -1.0, 0.4]).unwrap(), 1.1);
        let xr = xo.map(|x| math::mat_vec(&r, x));
        let (f, fr) = (local_basis(&xo).unwrap(), local_basis(&xr).unwrap());
        assert!(math::norm(math::sub(math::mat_vec(&r, f.ez), fr.ez)) < 1e-14);
        let g = (math::sub(xo[1], xo[0]), math::sub(xo[3], xo[0]), [0.0, 0.0, 0.1]);
        let c = CosineTable::new(&f, g.0, g.1, g.2);
        let rot = |v| math::mat_vec(&r, v);
        let cr = CosineTable::new(&fr, rot(g.0), rot(g.1), rot(g.2));
        for k in 0..3 {
            assert!((c.xi[k] - cr.xi[k]).abs() < 1e-14);
            assert!((c.eta[k] - cr.eta[k]).abs() < 1e-14);
            assert!((c.zeta[k] - cr.zeta[k]).abs() < 1e-14);
        }
    }
}
