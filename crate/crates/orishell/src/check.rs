//! Finite-difference and invariance checks run by `orishell check` and the
//! acceptance tests.

use orishell_core::assembly::Assembler;
use orishell_core::crease::{crease_response, fold_angle_at, CreaseParams};
use orishell_core::element::ElementKernel;
use orishell_core::math::{self, Vec3};
use orishell_core::mesh::CreaseSegment;
use orishell_core::{Material, Mesh, Scene};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Worst relative discrepancy of one check over all samples.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckLine {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

/// Relative infinity-norm distance, scaled by the larger of the two.
fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().chain(b).fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

fn random_axis(rng: &mut StdRng) -> Vec3 {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n = math::norm(v);
        if n > 0.1 && n <= 1.0 {
            return math::scale(v, 1.0 / n);
        }
    }
}

fn random_element(rng: &mut StdRng) -> ([Vec3; 4], [Vec3; 4], Material, [f64; 24], [f64; 24]) {
    let material = Material {
        youngs_modulus: 10f64.powf(rng.gen_range(3.0..7.0)),
        poisson_ratio: rng.gen_range(0.0..0.45),
        thickness: rng.gen_range(0.01..0.1),
    };
    let corners = [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]];
    let xo: [Vec3; 4] = corners.map(|[x, y]| [x + rng.gen_range(-0.15..0.15), y + rng.gen_range(-0.15..0.15), 0.0]);
    let half = 0.5 * material.thickness;
    let xn: [Vec3; 4] = core::array::from_fn(|_| [0.0, 0.0, half]);
    // a random rigid placement so the element is not axis aligned
    let r = math::rotation(random_axis(rng), rng.gen_range(0.0..3.0));
    let xo = xo.map(|x| math::mat_vec(&r, x));
    let xn = xn.map(|x| math::mat_vec(&r, x));
    let mut u = [0.0; 24];
    for (i, v) in u.iter_mut().enumerate() {
        *v = if i < 12 {
            rng.gen_range(-0.1..0.1)
        } else {
            rng.gen_range(-0.3..0.3) * half
        };
    }
    let steps: [f64; 24] = core::array::from_fn(|i| if i < 12 { 1e-6 } else { 1e-6 * half });
    (xo, xn, material, u, steps)
}

/// Central differences of energy and gradient for `samples` random element
/// states. Returns `(gradient, hessian)` worst cases.
pub fn element_derivatives(samples: usize, seed: u64) -> (CheckLine, CheckLine) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut wg, mut wh) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let (xo, xn, material, u, steps) = random_element(&mut rng);
        let kernel = ElementKernel::new(0, &xo, &xn, &material).expect("random element is valid");
        let r = kernel.force_stiffness(&u);
        let mut fd_g = [0.0; 24];
        let mut fd_h = vec![0.0; 24 * 24];
        let mut an_h = vec![0.0; 24 * 24];
        for i in 0..24 {
            let (mut up, mut um) = (u, u);
            up[i] += steps[i];
            um[i] -= steps[i];
            fd_g[i] = (kernel.energy(&up) - kernel.energy(&um)) / (2.0 * steps[i]);
            let (gp, gm) = (kernel.gradient(&up).1, kernel.gradient(&um).1);
            for j in 0..24 {
                // scale rows so translation and director blocks weigh alike
                let s = steps[j] / steps[i].max(steps[j]);
                fd_h[24 * j + i] = s * (gp[j] - gm[j]) / (2.0 * steps[i]);
                an_h[24 * j + i] = s * r.hessian[j][i];
            }
        }
        let g_scaled: Vec<f64> = (0..24).map(|i| r.gradient[i] * steps[i]).collect();
        let fd_scaled: Vec<f64> = (0..24).map(|i| fd_g[i] * steps[i]).collect();
        wg = wg.max(rel_diff(&g_scaled, &fd_scaled));
        wh = wh.max(rel_diff(&an_h, &fd_h));
    }
    (
        CheckLine {
            name: "element gradient",
            worst: wg,
            tolerance: 1e-6,
        },
        CheckLine {
            name: "element hessian",
            worst: wh,
            tolerance: 1e-5,
        },
    )
}

fn random_crease(rng: &mut StdRng) -> (CreaseSegment, [Vec3; 4], Vec3) {
    let half = rng.gen_range(0.005..0.05);
    let theta0 = rng.gen_range(-2.5..2.5);
    let params = if rng.gen_bool(0.5) {
        CreaseParams::with_default_limits(rng.gen_range(0.01..1.0), theta0).unwrap()
    } else {
        let lower = theta0 - rng.gen_range(0.0..(theta0 + 3.0));
        let upper = theta0 + rng.gen_range(0.0..(3.0 - theta0));
        CreaseParams::new(rng.gen_range(0.01..1.0), theta0, lower, upper).unwrap()
    };
    let seg = CreaseSegment {
        elem_a: 0,
        elem_b: 1,
        node1: 0,
        node2: 1,
        length: rng.gen_range(0.1..2.0),
        params,
    };
    // fold angles spread over (-2.9, 2.9) so barrier branches are sampled
    let axis = [1.0, 0.0, 0.0];
    let ta = rng.gen_range(-1.45..1.45);
    let tb = ta + rng.gen_range(-1.45..1.45);
    let mut dir = |theta: f64| -> Vec3 {
        let wobble = [rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)];
        let base = [0.0, -theta.sin(), theta.cos()];
        math::scale(math::add(base, wobble), half)
    };
    let dirs = [dir(ta), dir(ta), dir(tb), dir(tb)];
    let r = math::rotation(random_axis(rng), rng.gen_range(0.0..3.0));
    (seg, dirs.map(|d| math::mat_vec(&r, d)), math::mat_vec(&r, axis))
}

/// Central differences for `samples` random crease states.
pub fn crease_derivatives(samples: usize, seed: u64) -> (CheckLine, CheckLine) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut wg, mut wh) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < samples {
        let (seg, dirs, axis) = random_crease(&mut rng);
        let Ok(r) = crease_response(0, &seg, &dirs, axis, 0.01) else {
            continue;
        };
        let step = 1e-7 * math::norm(dirs[0]);
        let perturbed = |i: usize, d: f64| {
            let mut x = dirs;
            x[i / 3][i % 3] += d;
            crease_response(0, &seg, &x, axis, 0.01)
        };
        let mut fd_g = [0.0; 12];
        let mut fd_h = vec![0.0; 144];
        let mut an_h = vec![0.0; 144];
        let mut near_singular = false;
        for i in 0..12 {
            match (perturbed(i, step), perturbed(i, -step)) {
                (Ok(p), Ok(m)) => {
                    fd_g[i] = (p.energy - m.energy) / (2.0 * step);
                    for j in 0..12 {
                        fd_h[12 * j + i] = (p.gradient[j] - m.gradient[j]) / (2.0 * step);
                        an_h[12 * j + i] = r.hessian[j][i];
                    }
                }
                _ => near_singular = true,
            }
        }
        if near_singular {
            continue;
        }
        wg = wg.max(rel_diff(&r.gradient, &fd_g));
        wh = wh.max(rel_diff(&an_h, &fd_h));
        done += 1;
    }
    (
        CheckLine {
            name: "crease gradient",
            worst: wg,
            tolerance: 1e-6,
        },
        CheckLine {
            name: "crease hessian",
            worst: wh,
            tolerance: 1e-5,
        },
    )
}

/// Random displacement of moderate size: translations up to `scale` times
/// the mesh size, directors rotated and stretched by a few percent.
pub fn random_state(mesh: &Mesh, scale: f64, rng: &mut StdRng) -> Vec<f64> {
    let mut u = vec![0.0; mesh.total_dofs()];
    let size = mesh.characteristic_size();
    for n in 0..mesh.nodes().len() {
        for d in mesh.dof_map().translation(n) {
            u[d] = rng.gen_range(-scale..scale) * size;
        }
    }
    for (s, slot) in mesh.director_slots().iter().enumerate() {
        let len = math::norm(slot.director);
        for d in mesh.dof_map().director(s) {
            u[d] = rng.gen_range(-0.05..0.05) * len;
        }
    }
    u
}

/// Assembled tangent symmetry on random states of the given scenes.
pub fn stiffness_symmetry(scenes: &[Scene], seed: u64) -> CheckLine {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for scene in scenes {
        let assembler = Assembler::new(&scene.mesh).expect("generated scenes assemble");
        let u = random_state(&scene.mesh, 0.01, &mut rng);
        if let Ok(sys) = assembler.assemble(&u) {
            worst = worst.max(sys.stiffness.asymmetry());
        }
    }
    CheckLine {
        name: "stiffness symmetry",
        worst,
        tolerance: 1e-12,
    }
}

/// Applies `x -> R x + t` to a deformed state and returns the displacement
/// that represents it.
pub fn rigid_motion(mesh: &Mesh, u: &[f64], r: &[[f64; 3]; 3], t: Vec3) -> Vec<f64> {
    let mut out = vec![0.0; u.len()];
    let map = mesh.dof_map();
    for (n, x0) in mesh.nodes().iter().enumerate() {
        let d = map.translation(n);
        let x = [x0[0] + u[d[0]], x0[1] + u[d[1]], x0[2] + u[d[2]]];
        let y = math::add(math::mat_vec(r, x), t);
        for k in 0..3 {
            out[d[k]] = y[k] - x0[k];
        }
    }
    for (s, slot) in mesh.director_slots().iter().enumerate() {
        let d = map.director(s);
        let y = math::mat_vec(r, mesh.deformed_director(s, u));
        for k in 0..3 {
            out[d[k]] = y[k] - slot.director[k];
        }
    }
    out
}

/// Energy scale `E h A` of a scene.
pub fn energy_scale(mesh: &Mesh) -> f64 {
    let m = mesh.material();
    let area: f64 = (0..mesh.elements().len()).map(|e| mesh.element_area(e)).sum();
    m.youngs_modulus * m.thickness * area
}

/// Energy change under random rigid translations and finite rotations of
/// random deformed states, relative to [`energy_scale`], plus the largest
/// change of any fold angle.
pub fn rigid_invariance(scenes: &[Scene], trials: usize, seed: u64) -> (CheckLine, CheckLine) {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut we, mut wt) = (0.0f64, 0.0f64);
    for scene in scenes {
        let mesh = &scene.mesh;
        let assembler = Assembler::new(mesh).expect("generated scenes assemble");
        let scale = energy_scale(mesh);
        for _ in 0..trials {
            let u = random_state(mesh, 0.02, &mut rng);
            let Ok(e0) = assembler.energy(&u) else { continue };
            let size = mesh.characteristic_size();
            let t = [rng.gen_range(-5.0..5.0) * size, rng.gen_range(-5.0..5.0) * size, rng.gen_range(-5.0..5.0) * size];
            let r = math::rotation(random_axis(&mut rng), rng.gen_range(-3.0..3.0));
            let moved = rigid_motion(mesh, &u, &r, t);
            let e1 = assembler.energy(&moved).expect("rigid motion keeps the state admissible");
            we = we.max((e1 - e0).abs() / scale);
            for c in 0..mesh.creases().len() {
                for s in [-1.0, 0.0, 1.0] {
                    let a = fold_angle_at(mesh, c, &u, s).map(|f| f.theta);
                    let b = fold_angle_at(mesh, c, &moved, s).map(|f| f.theta);
                    if let (Ok(a), Ok(b)) = (a, b) {
                        wt = wt.max((a - b).abs());
                    }
                }
            }
        }
    }
    (
        CheckLine {
            name: "rigid-motion energy",
            worst: we,
            tolerance: 1e-10,
        },
        CheckLine {
            name: "rigid-motion fold angle",
            worst: wt,
            tolerance: 1e-10,
        },
    )
}

/// Scenes used by the property checks: the Miura cell, a small annulus
/// sector and the cantilever strip.
pub fn sample_scenes() -> Vec<Scene> {
    use orishell_core::bench::{self, annulus, miura};
    vec![
        bench::gen_miura_unit(&bench::MiuraParams::reference(), miura::reference_material(), 0.01, miura::COMPRESSION)
            .expect("reference cell"),
        bench::gen_annulus_sector(&bench::AnnulusParams::reference(8, 2), annulus::reference_material(), 1.0)
            .expect("reference sector"),
        bench::gen_cantilever(&bench::CantileverConfig::default()).expect("reference strip"),
    ]
}

/// Full suite with `samples` random states per derivative check.
pub fn run_suite(samples: usize, seed: u64) -> Vec<CheckLine> {
    let scenes = sample_scenes();
    let (eg, eh) = element_derivatives(samples, seed);
    let (cg, ch) = crease_derivatives(samples, seed.wrapping_add(1));
    let sym = stiffness_symmetry(&scenes, seed.wrapping_add(2));
    let (re, rt) = rigid_invariance(&scenes, 5, seed.wrapping_add(3));
    vec![eg, eh, cg, ch, sym, re, rt]
}
