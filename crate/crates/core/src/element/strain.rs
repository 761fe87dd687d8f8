//! Green-Lagrange strains of the solid-shell kinematics as quadratic forms.
//!
//! Collect the eight "vector nodes" of an element, mid-surface positions
//! first and directors second. Every retained strain component has the form
//! `e = sum_ab S_ab (x_a . x_b - X_a . X_b)` with a symmetric 8x8 scalar
//! matrix `S`, so the gradient with respect to `x_a` is `2 sum_b S_ab x_b`
//! and the Hessian block `(a, b)` is `2 S_ab I`.

use crate::element::shape::shape_functions;
use crate::math::{self, Vec3};

pub type Form = [[f64; 8]; 8];

/// Natural strain components in their fixed storage order.
pub const MEMBRANE: [usize; 3] = [0, 1, 2];
pub const BENDING: [usize; 3] = [3, 4, 5];
pub const SHEAR: [usize; 2] = [6, 7];
pub const THICKNESS: usize = 8;
pub const NUM_STRAINS: usize = 9;

const ZERO: Form = [[0.0; 8]; 8];

/// `sym(u v^T)`.
fn sym_outer(u: &[f64; 8], v: &[f64; 8]) -> Form {
    let mut s = ZERO;
    for a in 0..8 {
        for b in 0..8 {
            s[a][b] = 0.5 * (u[a] * v[b] + v[a] * u[b]);
        }
    }
    s
}

fn scaled(mut s: Form, f: f64) -> Form {
    s.iter_mut().flatten().for_each(|v| *v *= f);
    s
}

fn combine(terms: &[(f64, &Form)]) -> Form {
    let mut s = ZERO;
    for (w, f) in terms {
        for a in 0..8 {
            for b in 0..8 {
                s[a][b] += w * f[a][b];
            }
        }
    }
    s
}

struct Coefficients {
    dxi: [f64; 8],
    deta: [f64; 8],
    n: [f64; 8],
    nxi: [f64; 8],
    neta: [f64; 8],
}

fn coefficients(xi: f64, eta: f64) -> Coefficients {
    let s = shape_functions(xi, eta);
    let mut c = Coefficients {
        dxi: [0.0; 8],
        deta: [0.0; 8],
        n: [0.0; 8],
        nxi: [0.0; 8],
        neta: [0.0; 8],
    };
    for i in 0..4 {
        c.dxi[i] = s.dxi[i];
        c.deta[i] = s.deta[i];
        c.n[4 + i] = s.n[i];
        c.nxi[4 + i] = s.dxi[i];
        c.neta[4 + i] = s.deta[i];
    }
    c
}

/// Membrane `(e_xixi, e_etaeta, 2e_xieta)` followed by the bending
/// (first-order in zeta) counterparts.
pub fn membrane_bending_forms(xi: f64, eta: f64) -> [Form; 6] {
    let c = coefficients(xi, eta);
    [
        scaled(sym_outer(&c.dxi, &c.dxi), 0.5),
        scaled(sym_outer(&c.deta, &c.deta), 0.5),
        sym_outer(&c.dxi, &c.deta),
        sym_outer(&c.dxi, &c.nxi),
        sym_outer(&c.deta, &c.neta),
        combine(&[(1.0, &sym_outer(&c.dxi, &c.neta)), (1.0, &sym_outer(&c.nxi, &c.deta))]),
    ]
}

/// Transverse shear `(g_zetaxi, g_zetaeta)` evaluated directly at a point.
pub fn shear_forms(xi: f64, eta: f64) -> [Form; 2] {
    let c = coefficients(xi, eta);
    [sym_outer(&c.dxi, &c.n), sym_outer(&c.deta, &c.n)]
}

/// Thickness strain `e_zetazeta` at corner node `i`.
pub fn thickness_form(node: usize) -> Form {
    let mut s = ZERO;
    s[4 + node][4 + node] = 0.5;
    s
}

/// Blending weights of the assumed-strain fields at `(xi, eta)`:
/// `g_zetaxi` from its values at `(0, -1)` and `(0, 1)`, `g_zetaeta` from
/// `(-1, 0)` and `(1, 0)`, `e_zetazeta` from the four nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsWeights {
    pub shear_xi: [f64; 2],
    pub shear_eta: [f64; 2],
    pub thickness: [f64; 4],
}

pub fn ans_weights(xi: f64, eta: f64) -> AnsWeights {
    AnsWeights {
        shear_xi: [0.5 * (1.0 - eta), 0.5 * (1.0 + eta)],
        shear_eta: [0.5 * (1.0 - xi), 0.5 * (1.0 + xi)],
        thickness: shape_functions(xi, eta).n,
    }
}

/// Assumed-strain values at `(xi, eta)` from sampled shear and nodal
/// thickness strains.
pub fn ans_interpolate(
    shear_xi: [f64; 2],
    shear_eta: [f64; 2],
    thickness: [f64; 4],
    xi: f64,
    eta: f64,
) -> (f64, f64, f64) {
    let w = ans_weights(xi, eta);
    (
        w.shear_xi[0] * shear_xi[0] + w.shear_xi[1] * shear_xi[1],
        w.shear_eta[0] * shear_eta[0] + w.shear_eta[1] * shear_eta[1],
        (0..4).map(|i| w.thickness[i] * thickness[i]).sum(),
    )
}

/// All nine natural strain forms at `(xi, eta)` with the assumed-strain
/// interpolation already folded in.
pub fn natural_forms(xi: f64, eta: f64) -> [Form; NUM_STRAINS] {
    let mb = membrane_bending_forms(xi, eta);
    let w = ans_weights(xi, eta);
    let gxi = [shear_forms(0.0, -1.0)[0], shear_forms(0.0, 1.0)[0]];
    let geta = [shear_forms(-1.0, 0.0)[1], shear_forms(1.0, 0.0)[1]];
    let mut ezz = ZERO;
    for i in 0..4 {
        ezz[4 + i][4 + i] = 0.5 * w.thickness[i];
    }
    [
        mb[0],
        mb[1],
        mb[2],
        mb[3],
        mb[4],
        mb[5],
        combine(&[(w.shear_xi[0], &gxi[0]), (w.shear_xi[1], &gxi[1])]),
        combine(&[(w.shear_eta[0], &geta[0]), (w.shear_eta[1], &geta[1])]),
        ezz,
    ]
}

/// Vector nodes `[x_o1..x_o4, x_n1..x_n4]`.
pub fn vector_nodes(xo: &[Vec3; 4], xn: &[Vec3; 4]) -> [Vec3; 8] {
    core::array::from_fn(|a| if a < 4 { xo[a] } else { xn[a - 4] })
}

/// Current vector nodes from reference ones and the 24 element displacements.
pub fn displaced(reference: &[Vec3; 8], u: &[f64; 24]) -> [Vec3; 8] {
    core::array::from_fn(|a| {
        let r = reference[a];
        [r[0] + u[3 * a], r[1] + u[3 * a + 1], r[2] + u[3 * a + 2]]
    })
}

/// Element displacements as eight 3-vectors.
pub fn split(u: &[f64; 24]) -> [Vec3; 8] {
    core::array::from_fn(|a| [u[3 * a], u[3 * a + 1], u[3 * a + 2]])
}

/// `x_a . x_b - X_a . X_b`, expanded in the displacements so that small
/// strains on large reference coordinates keep their precision.
pub fn gram_change(reference: &[Vec3; 8], disp: &[Vec3; 8]) -> Form {
    let mut g = ZERO;
    for a in 0..8 {
        for b in a..8 {
            let v = math::dot(reference[a], disp[b]) + math::dot(disp[a], reference[b]) + math::dot(disp[a], disp[b]);
            g[a][b] = v;
            g[b][a] = v;
        }
    }
    g
}

pub fn contract(s: &Form, g: &Form) -> f64 {
    let mut e = 0.0;
    for a in 0..8 {
        for b in 0..8 {
            e += s[a][b] * g[a][b];
        }
    }
    e
}

/// Natural strains of one element state at `(xi, eta)`, before the
/// assumed-strain blending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalStrains {
    pub membrane: [f64; 3],
    pub bending: [f64; 3],
    /// `g_zetaxi` at `(0, -1)` and `(0, 1)`.
    pub shear_xi: [f64; 2],
    /// `g_zetaeta` at `(-1, 0)` and `(1, 0)`.
    pub shear_eta: [f64; 2],
    /// `e_zetazeta` at the four nodes.
    pub thickness: [f64; 4],
}

pub fn natural_strains(xo: &[Vec3; 4], xn: &[Vec3; 4], u: &[f64; 24], xi: f64, eta: f64) -> NaturalStrains {
    let reference = vector_nodes(xo, xn);
    let g = gram_change(&reference, &split(u));
    let mb = membrane_bending_forms(xi, eta);
    NaturalStrains {
        membrane: core::array::from_fn(|k| contract(&mb[k], &g)),
        bending: core::array::from_fn(|k| contract(&mb[3 + k], &g)),
        shear_xi: [
            contract(&shear_forms(0.0, -1.0)[0], &g),
            contract(&shear_forms(0.0, 1.0)[0], &g),
        ],
        shear_eta: [
            contract(&shear_forms(-1.0, 0.0)[1], &g),
            contract(&shear_forms(1.0, 0.0)[1], &g),
        ],
        thickness: core::array::from_fn(|i| contract(&thickness_form(i), &g)),
    }
}
