//! Fold angle between the director fields of two panels and the crease
//! energy with logarithmic barriers near full fold.

use core::f64::consts::PI;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::element::shape::GAUSS_2;
use crate::error::{Error, Result};
use crate::math::{self, Vec3};
use crate::mesh::{CreaseSegment, Mesh};

/// Folding law of one crease. Energies are per unit length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CreaseParams {
    pub stiffness: f64,
    pub rest_angle: f64,
    /// Below this angle the left barrier is active.
    pub lower: f64,
    /// Above this angle the right barrier is active.
    pub upper: f64,
}

impl CreaseParams {
    pub fn new(stiffness: f64, rest_angle: f64, lower: f64, upper: f64) -> Result<Self> {
        let bad = |reason| Error::InvalidParameter { name: "crease", reason };
        if !(stiffness >= 0.0 && stiffness.is_finite()) {
            return Err(bad("folding stiffness must be non-negative"));
        }
        if !(-PI < lower && lower <= rest_angle && rest_angle <= upper && upper < PI) {
            return Err(bad("require -pi < theta_L <= theta_0 <= theta_R < pi"));
        }
        Ok(CreaseParams {
            stiffness,
            rest_angle,
            lower,
            upper,
        })
    }

    /// Barriers engage over the last tenth of the way to `-pi` and `pi`.
    pub fn with_default_limits(stiffness: f64, rest_angle: f64) -> Result<Self> {
        let (lower, upper) = default_limits(rest_angle);
        Self::new(stiffness, rest_angle, lower, upper)
    }

    /// Energy density and its first two derivatives at `theta`. Outside
    /// `(-pi, pi)` the density is `+inf`.
    pub fn density_derivatives(&self, theta: f64) -> (f64, f64, f64) {
        let (k, t0, tl, tr) = (self.stiffness, self.rest_angle, self.lower, self.upper);
        if !(theta.abs() < PI) {
            return (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        }
        if theta < tl {
            let span = tl + PI;
            let u = PI * (tl - theta) / (2.0 * span);
            let (s, c) = u.sin_cos();
            if !(c > 0.0) {
                return (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY);
            }
            let psi = 0.5 * k * (t0 - tl) * (t0 - tl) + k * (t0 - tl) * (tl - theta)
                - 4.0 * k * span * span / (PI * PI) * c.ln();
            let d1 = -k * (t0 - tl) - 2.0 * k * span / PI * (s / c);
            (psi, d1, k / (c * c))
        } else if theta > tr {
            let span = PI - tr;
            let u = PI * (theta - tr) / (2.0 * span);
            let (s, c) = u.sin_cos();
            if !(c > 0.0) {
                return (f64::INFINITY, f64::INFINITY, f64::INFINITY);
            }
            let psi = 0.5 * k * (tr - t0) * (tr - t0) + k * (tr - t0) * (theta - tr)
                - 4.0 * k * span * span / (PI * PI) * c.ln();
            let d1 = k * (tr - t0) + 2.0 * k * span / PI * (s / c);
            (psi, d1, k / (c * c))
        } else {
            let d = theta - t0;
            (0.5 * k * d * d, k * d, k)
        }
    }
}

pub fn default_limits(rest_angle: f64) -> (f64, f64) {
    (
        rest_angle - 0.9 * (rest_angle + PI),
        rest_angle + 0.9 * (PI - rest_angle),
    )
}

pub fn crease_energy_density(theta: f64, params: &CreaseParams) -> f64 {
    params.density_derivatives(theta).0
}

/// Fold angle with the directors and crease axis it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldAngleState {
    pub theta: f64,
    pub p: Vec3,
    pub q: Vec3,
    pub axis: Vec3,
}

/// Signed angle from `p` to `q`, positive when `(p x q) . axis >= 0`.
pub fn fold_angle(p: Vec3, q: Vec3, axis: Vec3) -> f64 {
    let w = math::cross(p, q);
    let sign = if math::dot(w, axis) >= 0.0 { 1.0 } else { -1.0 };
    (sign * math::norm(w)).atan2(math::dot(p, q))
}

/// Linear blend along the crease, `s = -1` at node 1 and `s = 1` at node 2.
fn blend(s: f64) -> (f64, f64) {
    (0.5 * (1.0 - s), 0.5 * (1.0 + s))
}

/// Current directors `[a@node1, a@node2, b@node1, b@node2]` and crease axis.
pub fn crease_state(mesh: &Mesh, crease: usize, u: &[f64]) -> ([Vec3; 4], Vec3) {
    let c = &mesh.creases()[crease];
    let slots = mesh.crease_slots(crease);
    let dirs = slots.map(|s| mesh.deformed_director(s, u));
    let map = mesh.dof_map();
    let pos = |n: usize| {
        let d = map.translation(n);
        let x = mesh.nodes()[n];
        [x[0] + u[d[0]], x[1] + u[d[1]], x[2] + u[d[2]]]
    };
    (dirs, math::sub(pos(c.node2), pos(c.node1)))
}

pub fn fold_angle_at(mesh: &Mesh, crease: usize, u: &[f64], s: f64) -> Result<FoldAngleState> {
    let (dirs, axis) = crease_state(mesh, crease, u);
    let (l1, l2) = blend(s);
    let p = math::add(math::scale(dirs[0], l1), math::scale(dirs[1], l2));
    let q = math::add(math::scale(dirs[2], l1), math::scale(dirs[3], l2));
    let tiny = 1e-12 * mesh.material().thickness;
    if !(math::norm(p) >= tiny && math::norm(q) >= tiny) {
        return Err(Error::ZeroDirector { crease });
    }
    Ok(FoldAngleState {
        theta: fold_angle(p, q, axis),
        p,
        q,
        axis,
    })
}

/// Energy, gradient and Hessian of a crease over its four director slots,
/// ordered `[a@node1, a@node2, b@node1, b@node2]`. Mid-surface translations
/// only enter through the sign of the fold, so their derivatives vanish.
#[derive(Debug, Clone)]
pub struct CreaseResponse {
    pub energy: f64,
    pub gradient: [f64; 12],
    pub hessian: [[f64; 12]; 12],
}

/// Angle, gradient and Hessian with respect to `(p, q)`.
fn angle_derivatives(p: Vec3, q: Vec3, axis: Vec3) -> (f64, [f64; 6], [[f64; 6]; 6]) {
    let w = math::cross(p, q);
    let wn = math::norm(w);
    let c = math::dot(p, q);
    let sign = if math::dot(w, axis) >= 0.0 { 1.0 } else { -1.0 };
    let y = sign * wn;
    let theta = y.atan2(c);
    let degenerate = wn <= 1e-12 * math::norm(p) * math::norm(q);
    let m = if degenerate {
        math::normalize(axis).unwrap_or([0.0; 3])
    } else {
        math::scale(w, sign / wn)
    };

    let mut dy = [0.0; 6];
    dy[..3].copy_from_slice(&math::cross(q, m));
    dy[3..].copy_from_slice(&math::cross(m, p));
    let mut dc = [0.0; 6];
    dc[..3].copy_from_slice(&q);
    dc[3..].copy_from_slice(&p);

    let mut hy = [[0.0; 6]; 6];
    if !degenerate {
        // J_w^T (I - w w^T) J_w / |w| with J_w = [-[q]x, [p]x]
        let jw = {
            let sq = math::skew(q);
            let sp = math::skew(p);
            let mut j = [[0.0; 6]; 3];
            for r in 0..3 {
                for k in 0..3 {
                    j[r][k] = -sq[r][k];
                    j[r][3 + k] = sp[r][k];
                }
            }
            j
        };
        let what = math::scale(w, 1.0 / wn);
        let mut proj = [[0.0; 3]; 3];
        for r in 0..3 {
            for k in 0..3 {
                proj[r][k] = (if r == k { 1.0 } else { 0.0 }) - what[r] * what[k];
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                let mut s = 0.0;
                for r in 0..3 {
                    for k in 0..3 {
                        s += jw[r][i] * proj[r][k] * jw[k][j];
                    }
                }
                hy[i][j] = sign * s / wn;
            }
        }
    }
    let sm = math::skew(m);
    for r in 0..3 {
        for k in 0..3 {
            hy[r][3 + k] -= sm[r][k];
            hy[3 + k][r] -= sm[r][k];
        }
    }
    let mut hc = [[0.0; 6]; 6];
    for r in 0..3 {
        hc[r][3 + r] = 1.0;
        hc[3 + r][r] = 1.0;
    }

    let r2 = y * y + c * c;
    let g: [f64; 6] = core::array::from_fn(|i| (c * dy[i] - y * dc[i]) / r2);
    let mut h = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            h[i][j] = (c * hy[i][j] - y * hc[i][j] + dy[i] * dc[j] - dc[i] * dy[j]) / r2
                - 2.0 * g[i] * (y * dy[j] + c * dc[j]) / r2;
        }
    }
    for i in 0..6 {
        for j in 0..i {
            let s = 0.5 * (h[i][j] + h[j][i]);
            h[i][j] = s;
            h[j][i] = s;
        }
    }
    (theta, g, h)
}

/// Crease energy `(l/2) sum_g psi(theta(s_g))` over a two-point Gauss rule.
pub fn crease_response(
    index: usize,
    crease: &CreaseSegment,
    dirs: &[Vec3; 4],
    axis: Vec3,
    thickness: f64,
) -> Result<CreaseResponse> {
    let mut out = CreaseResponse {
        energy: 0.0,
        gradient: [0.0; 12],
        hessian: [[0.0; 12]; 12],
    };
    let half = 0.5 * crease.length;
    let tiny = 1e-12 * thickness;
    for &s in GAUSS_2.iter() {
        let (l1, l2) = blend(s);
        let p = math::add(math::scale(dirs[0], l1), math::scale(dirs[1], l2));
        let q = math::add(math::scale(dirs[2], l1), math::scale(dirs[3], l2));
        if !(math::norm(p) >= tiny && math::norm(q) >= tiny) {
            return Err(Error::ZeroDirector { crease: index });
        }
        let (theta, g, h) = angle_derivatives(p, q, axis);
        let (psi, d1, d2) = crease.params.density_derivatives(theta);
        if !psi.is_finite() {
            return Err(Error::BarrierOverflow { crease: index, theta });
        }
        out.energy += half * psi;
        // slot k of (a1, a2, b1, b2) maps to p or q with weight l1 or l2
        let weight = [l1, l2, l1, l2];
        let side = [0, 0, 3, 3];
        for a in 0..4 {
            for i in 0..3 {
                let gi = g[side[a] + i] * weight[a];
                out.gradient[3 * a + i] += half * d1 * gi;
                for b in 0..4 {
                    for j in 0..3 {
                        let gj = g[side[b] + j] * weight[b];
                        let hij = h[side[a] + i][side[b] + j] * weight[a] * weight[b];
                        out.hessian[3 * a + i][3 * b + j] += half * (d2 * gi * gj + d1 * hij);
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn crease_contribution(mesh: &Mesh, crease: usize, u: &[f64]) -> Result<CreaseResponse> {
    let (dirs, axis) = crease_state(mesh, crease, u);
    crease_response(crease, &mesh.creases()[crease], &dirs, axis, mesh.material().thickness)
}
