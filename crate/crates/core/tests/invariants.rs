use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use orishell_core::crease::{default_limits, fold_angle, CreaseParams};
use orishell_core::element::energy::ElementKernel;
use orishell_core::math::{self, Vec3};
use orishell_core::Material;
use proptest::prelude::*;

fn quad() -> impl Strategy<Value = [Vec3; 4]> {
    // corners of the unit square jittered by up to 20% of the side
    prop::array::uniform8(-0.2f64..0.2).prop_map(|j| {
        let base = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        core::array::from_fn(|a| [base[a][0] + j[2 * a], base[a][1] + j[2 * a + 1], 0.0])
    })
}

fn material() -> impl Strategy<Value = Material> {
    (0.0f64..0.45, 0.01f64..0.1).prop_map(|(nu, h)| Material::new(1.0, nu, h).unwrap())
}

fn kernel(xo: &[Vec3; 4], m: &Material) -> ElementKernel {
    let xn = [[0.0, 0.0, 0.5 * m.thickness]; 4];
    ElementKernel::new(0, xo, &xn, m).unwrap()
}

/// Displacement that carries the deformed state `u` through `x -> R x + t`.
fn moved(xo: &[Vec3; 4], xn: Vec3, u: &[f64; 24], r: &[[f64; 3]; 3], t: Vec3) -> [f64; 24] {
    let mut out = [0.0; 24];
    for a in 0..4 {
        let x = math::add(xo[a], [u[3 * a], u[3 * a + 1], u[3 * a + 2]]);
        let y = math::add(math::mat_vec(r, x), t);
        let d = math::add(xn, [u[12 + 3 * a], u[13 + 3 * a], u[14 + 3 * a]]);
        let e = math::mat_vec(r, d);
        for i in 0..3 {
            out[3 * a + i] = y[i] - xo[a][i];
            out[12 + 3 * a + i] = e[i] - xn[i];
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn element_gradient_matches_energy_differences(
        xo in quad(),
        m in material(),
        u in prop::array::uniform24(-0.01f64..0.01),
    ) {
        let k = kernel(&xo, &m);
        let (_, g) = k.gradient(&u);
        let step = 1e-6;
        let scale = g.iter().fold(1e-12f64, |a, v| a.max(v.abs()));
        for i in 0..24 {
            let (mut p, mut n) = (u, u);
            p[i] += step;
            n[i] -= step;
            let fd = (k.energy(&p) - k.energy(&n)) / (2.0 * step);
            prop_assert!((fd - g[i]).abs() <= 1e-5 * scale, "dof {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn element_tangent_is_symmetric(
        xo in quad(),
        m in material(),
        u in prop::array::uniform24(-0.05f64..0.05),
    ) {
        let r = kernel(&xo, &m).force_stiffness(&u);
        let scale = r.hessian.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
        for i in 0..24 {
            for j in 0..i {
                prop_assert!((r.hessian[i][j] - r.hessian[j][i]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn element_energy_ignores_rigid_motion(
        xo in quad(),
        m in material(),
        u in prop::array::uniform24(-0.05f64..0.05),
        axis in prop::array::uniform3(-1.0f64..1.0),
        angle in -PI..PI,
        t in prop::array::uniform3(-5.0f64..5.0),
    ) {
        prop_assume!(math::norm(axis) > 0.1);
        let rot = math::rotation(math::normalize(axis).unwrap(), angle);
        let k = kernel(&xo, &m);
        let before = k.energy(&u);
        let after = k.energy(&moved(&xo, [0.0, 0.0, 0.5 * m.thickness], &u, &rot, t));
        // energies are measured against the membrane scale E h A
        prop_assert!((before - after).abs() <= 1e-11 * m.thickness);
    }

    #[test]
    fn crease_law_is_c1_and_grows_away_from_rest(
        k in 0.01f64..10.0,
        t0 in -2.9f64..2.9,
        fl in 0.05f64..0.95,
        fr in 0.05f64..0.95,
        probe in 0.0f64..1.0,
    ) {
        let lower = t0 - fl * (t0 + PI);
        let upper = t0 + fr * (PI - t0);
        let p = CreaseParams::new(k, t0, lower, upper).unwrap();
        for (edge, out) in [(lower, lower.next_down()), (upper, upper.next_up())] {
            let (a, b) = (p.density_derivatives(edge), p.density_derivatives(out));
            prop_assert!((a.0 - b.0).abs() <= 1e-10 * (1.0 + a.0.abs()));
            prop_assert!((a.1 - b.1).abs() <= 1e-10 * (1.0 + a.1.abs()));
        }
        let left = -PI + probe * (t0 + PI);
        let right = t0 + probe * (PI - t0);
        let (pl, dl, hl) = p.density_derivatives(left);
        let (pr, dr, hr) = p.density_derivatives(right);
        prop_assert!(pl >= 0.0 && pr >= 0.0);
        prop_assert!(dl <= 0.0 && dr >= 0.0);
        prop_assert!(hl > 0.0 && hr > 0.0);
    }

    #[test]
    fn fold_angle_flips_with_panel_order(
        p in prop::array::uniform3(-1.0f64..1.0),
        q in prop::array::uniform3(-1.0f64..1.0),
        axis in prop::array::uniform3(-1.0f64..1.0),
    ) {
        prop_assume!(math::norm(p) > 1e-3 && math::norm(q) > 1e-3 && math::norm(axis) > 1e-3);
        let a = fold_angle(p, q, axis);
        prop_assert!(a.abs() <= PI);
        prop_assert!(math::norm(math::cross(p, q)) == 0.0 || (a + fold_angle(q, p, axis)).abs() == 0.0);
    }

    #[test]
    fn default_limits_bracket_rest_angle(t0 in -3.1f64..3.1) {
        let (l, r) = default_limits(t0);
        prop_assert!(-PI < l && l < t0 && t0 < r && r < PI);
    }
}

#[test]
fn undeformed_element_has_six_zero_energy_modes() {
    let xo = [[0.0, 0.0, 0.0], [1.2, 0.1, 0.0], [1.0, 0.9, 0.0], [-0.15, 1.1, 0.0]];
    let m = Material::new(1.0, 0.3, 0.05).unwrap();
    let r = kernel(&xo, &m).force_stiffness(&[0.0; 24]);
    let k = DMatrix::from_fn(24, 24, |i, j| r.hessian[i][j]);
    let mut eig: Vec<f64> = SymmetricEigen::new(k).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    let largest = eig[23];
    assert!(eig[..6].iter().all(|v| v.abs() < 1e-10 * largest), "{eig:?}");
    assert!(eig[6] > 1e-8 * largest, "{eig:?}");
}
