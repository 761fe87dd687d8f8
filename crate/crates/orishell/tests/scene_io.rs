use std::path::Path;

use orishell::scene_file::{parse_scene, parse_scene_str, serialize_scene, SceneFile};
use orishell_core::bench::{self, annulus, miura, AnnulusParams, CantileverConfig, MiuraParams};
use orishell_core::scene::NodalDof;
use orishell_core::{Component, Scene};

fn generated() -> Vec<Scene> {
    vec![
        bench::gen_miura_unit(&MiuraParams::reference(), miura::reference_material(), 0.01, miura::COMPRESSION).unwrap(),
        bench::gen_annulus_sector(&AnnulusParams::reference(8, 2), annulus::reference_material(), 0.5).unwrap(),
        bench::gen_cantilever(&CantileverConfig::with_mesh(4, 2)).unwrap(),
        bench::gen_qualitative("miura_sheet").unwrap(),
        bench::gen_qualitative("full_annulus").unwrap(),
    ]
}

#[test]
fn generated_scenes_round_trip() {
    for scene in generated() {
        let text = serialize_scene(&scene);
        let back = parse_scene_str(&text, &scene.name).unwrap();
        assert_eq!(SceneFile::from_scene(&back), SceneFile::from_scene(&scene), "{}", scene.name);
        assert_eq!(back.mesh.nodes(), scene.mesh.nodes());
        assert_eq!(back.mesh.creases(), scene.mesh.creases());
        assert_eq!(back.mesh.dof_map(), scene.mesh.dof_map());
        assert_eq!(back.boundary_conditions().unwrap(), scene.boundary_conditions().unwrap());
        assert_eq!(serialize_scene(&back), text);
    }
}

#[test]
fn shipped_miura_scene_matches_generator() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes/miura_unit.scene");
    let shipped = parse_scene(&path).unwrap();
    let generated = &generated()[0];
    assert_eq!(serialize_scene(&shipped), serialize_scene(generated));

    // O pinned, u = 0 at A and B, w = 0 at O, B, C, D, E, G, u = -3.44 at E, F, G
    let id = miura::node_id;
    let fixed = |n: usize, c: Component| shipped.fixed.contains(&NodalDof { node: n, component: c });
    use Component::{U, V, W};
    for c in [U, V, W] {
        assert!(fixed(id(0, 0), c));
    }
    assert!(fixed(id(0, 1), U) && fixed(id(0, 2), U));
    for (i, j) in [(0, 0), (0, 2), (1, 0), (1, 2), (2, 0), (2, 2)] {
        assert!(fixed(id(i, j), W), "w at ({i}, {j})");
    }
    assert_eq!(shipped.fixed.len(), 3 + 2 + 5);
    assert_eq!(shipped.prescribed.len(), 3);
    for (j, p) in shipped.prescribed.iter().enumerate() {
        assert_eq!((p.node, p.component, p.value), (id(2, j), U, -3.44));
    }
    assert_eq!(shipped.solver.max_increments, 100);
}
