//! JSON scene files.
//!
//! ```json
//! {
//!   "name": "one_quad",
//!   "nodes": [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
//!   "elements": [{ "nodes": [0, 1, 2, 3], "panel": 0 }],
//!   "creases": [],
//!   "material": { "E": 1e6, "nu": 0.3, "h": 0.01 },
//!   "bcs": [{ "node": 0, "dofs": ["u", "v", "w"] }],
//!   "prescribed": [{ "node": 2, "dof": "w", "value": 0.1 }],
//!   "forces": [],
//!   "solver": { "max_increments": 10 },
//!   "outputs": { "tracked_nodes": [2], "every": 1 }
//! }
//! ```
//!
//! Crease entries take `elements`, `nodes`, `k_f`, `theta0` and optionally
//! both of `theta_l`, `theta_r`.

use std::fs;
use std::path::{Path, PathBuf};

use orishell_core::crease::default_limits;
use orishell_core::mesh::CreaseSpec;
use orishell_core::scene::OutputSpec;
use orishell_core::{Component, Material, Mesh, NodalValue, Scene, SolverConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("{}: file not found", .0.display())]
    NotFound(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> SceneError {
    SceneError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default = "default_name")]
    pub name: String,
    pub nodes: Vec<[f64; 3]>,
    pub elements: Vec<ElementEntry>,
    #[serde(default)]
    pub creases: Vec<CreaseEntry>,
    pub material: MaterialEntry,
    #[serde(default)]
    pub bcs: Vec<FixedEntry>,
    #[serde(default)]
    pub prescribed: Vec<ValueEntry>,
    #[serde(default)]
    pub forces: Vec<ValueEntry>,
    #[serde(default)]
    pub solver: SolverEntry,
    #[serde(default)]
    pub outputs: OutputEntry,
}

fn default_name() -> String {
    "scene".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementEntry {
    pub nodes: [usize; 4],
    #[serde(default)]
    pub panel: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CreaseEntry {
    pub elements: [usize; 2],
    pub nodes: [usize; 2],
    pub k_f: f64,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialEntry {
    #[serde(rename = "E")]
    pub youngs_modulus: f64,
    #[serde(rename = "nu")]
    pub poisson_ratio: f64,
    #[serde(rename = "h")]
    pub thickness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedEntry {
    pub node: usize,
    pub dofs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueEntry {
    pub node: usize,
    pub dof: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverEntry {
    pub max_increments: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub max_iterations: usize,
    pub max_recoveries: usize,
}

impl Default for SolverEntry {
    fn default() -> Self {
        let c = SolverConfig::default();
        SolverEntry {
            max_increments: c.max_increments,
            tolerance: c.tolerance,
            max_iterations: c.max_iterations,
            max_recoveries: c.max_recoveries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputEntry {
    #[serde(default)]
    pub tracked_nodes: Vec<usize>,
    #[serde(default = "one")]
    pub every: usize,
}

fn one() -> usize {
    1
}

impl Default for OutputEntry {
    fn default() -> Self {
        OutputEntry {
            tracked_nodes: Vec::new(),
            every: 1,
        }
    }
}

pub fn parse_scene(path: &Path) -> Result<Scene, SceneError> {
    let text = fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => SceneError::NotFound(path.to_path_buf()),
        _ => SceneError::Io {
            path: path.to_path_buf(),
            source: e,
        },
    })?;
    parse_scene_str(&text, &path.display().to_string())
}

/// Parses scene text; `origin` labels the location in parse errors.
pub fn parse_scene_str(text: &str, origin: &str) -> Result<Scene, SceneError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneError::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_location(&e.to_string()),
    })?;
    file.to_scene()
}

fn strip_location(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

pub fn serialize_scene(scene: &Scene) -> String {
    let mut text = serde_json::to_string_pretty(&SceneFile::from_scene(scene)).expect("scene files serialize");
    text.push('\n');
    text
}

pub fn write_scene(scene: &Scene, path: &Path) -> std::io::Result<()> {
    fs::write(path, serialize_scene(scene))
}

fn component(name: &str, field: &str) -> Result<Component, SceneError> {
    Component::from_name(name).ok_or_else(|| {
        invalid(
            field,
            format!("unknown dof `{name}` (expected one of u, v, w, dir_x, dir_y, dir_z)"),
        )
    })
}

impl SceneFile {
    pub fn to_scene(&self) -> Result<Scene, SceneError> {
        let n = self.nodes.len();
        for (i, x) in self.nodes.iter().enumerate() {
            if x.iter().any(|c| !c.is_finite()) {
                return Err(invalid(format!("nodes[{i}]"), "coordinates must be finite"));
            }
        }
        for (i, e) in self.elements.iter().enumerate() {
            if let Some(&bad) = e.nodes.iter().find(|&&v| v >= n) {
                return Err(invalid(format!("elements[{i}].nodes"), format!("node {bad} does not exist")));
            }
        }
        let mut creases = Vec::with_capacity(self.creases.len());
        for (i, c) in self.creases.iter().enumerate() {
            let field = |f: &str| format!("creases[{i}].{f}");
            if !(c.k_f >= 0.0 && c.k_f.is_finite()) {
                return Err(invalid(field("k_f"), "k_f ≥ 0 required"));
            }
            let limits = match (c.theta_l, c.theta_r) {
                (None, None) => None,
                (Some(l), Some(r)) => {
                    if l > r {
                        return Err(invalid(field("theta_l"), "θL ≤ θR required"));
                    }
                    if !(l <= c.theta0 && c.theta0 <= r) {
                        return Err(invalid(field("theta0"), "θL ≤ θ0 ≤ θR required"));
                    }
                    Some((l, r))
                }
                _ => return Err(invalid(field("theta_l"), "θL and θR must be given together")),
            };
            let (l, r) = limits.unwrap_or_else(|| default_limits(c.theta0));
            if !(l > -std::f64::consts::PI && r < std::f64::consts::PI) {
                return Err(invalid(field("theta0"), "limits must lie strictly inside (-π, π)"));
            }
            creases.push(CreaseSpec {
                elements: c.elements,
                nodes: c.nodes,
                stiffness: c.k_f,
                rest_angle: c.theta0,
                limits,
            });
        }
        let m = &self.material;
        let material = Material::new(m.youngs_modulus, m.poisson_ratio, m.thickness)
            .map_err(|e| invalid("material", e.to_string()))?;
        let quads = self.elements.iter().map(|e| e.nodes).collect();
        let panels = self.elements.iter().map(|e| e.panel).collect();
        let mesh = Mesh::build(self.nodes.clone(), quads, panels, &creases, material)
            .map_err(|e| invalid("mesh", e.to_string()))?;

        let mut scene = Scene::new(self.name.clone(), mesh);
        for (i, b) in self.bcs.iter().enumerate() {
            if b.node >= n {
                return Err(invalid(format!("bcs[{i}].node"), format!("node {} does not exist", b.node)));
            }
            let comps = b
                .dofs
                .iter()
                .map(|d| component(d, &format!("bcs[{i}].dofs")))
                .collect::<Result<Vec<_>, _>>()?;
            scene.fix(b.node, &comps);
        }
        for (list, label) in [(&self.prescribed, "prescribed"), (&self.forces, "forces")] {
            for (i, p) in list.iter().enumerate() {
                if p.node >= n {
                    return Err(invalid(format!("{label}[{i}].node"), format!("node {} does not exist", p.node)));
                }
                if !p.value.is_finite() {
                    return Err(invalid(format!("{label}[{i}].value"), "value must be finite"));
                }
                let c = component(&p.dof, &format!("{label}[{i}].dof"))?;
                let v = NodalValue {
                    node: p.node,
                    component: c,
                    value: p.value,
                };
                if label == "prescribed" {
                    scene.prescribed.push(v);
                } else {
                    scene.forces.push(v);
                }
            }
        }
        scene.solver = SolverConfig {
            max_increments: self.solver.max_increments,
            max_iterations: self.solver.max_iterations,
            tolerance: self.solver.tolerance,
            max_recoveries: self.solver.max_recoveries,
        };
        scene.outputs = OutputSpec {
            tracked_nodes: self.outputs.tracked_nodes.clone(),
            snapshot_every: self.outputs.every,
        };
        scene.solver.validate().map_err(|e| invalid("solver", e.to_string()))?;
        scene.validate().map_err(|e| match e {
            orishell_core::Error::InvalidParameter { name, reason } => invalid(name, reason),
            other => invalid("bcs", other.to_string()),
        })?;
        Ok(scene)
    }

    pub fn from_scene(scene: &Scene) -> SceneFile {
        let mesh = &scene.mesh;
        let m = mesh.material();
        let mut bcs: Vec<FixedEntry> = Vec::new();
        for f in &scene.fixed {
            match bcs.last_mut() {
                Some(last) if last.node == f.node => last.dofs.push(f.component.name().to_string()),
                _ => bcs.push(FixedEntry {
                    node: f.node,
                    dofs: vec![f.component.name().to_string()],
                }),
            }
        }
        let values = |list: &[NodalValue]| {
            list.iter()
                .map(|v| ValueEntry {
                    node: v.node,
                    dof: v.component.name().to_string(),
                    value: v.value,
                })
                .collect()
        };
        SceneFile {
            name: scene.name.clone(),
            nodes: mesh.nodes().to_vec(),
            elements: mesh
                .elements()
                .iter()
                .map(|e| ElementEntry {
                    nodes: e.nodes,
                    panel: e.panel,
                })
                .collect(),
            creases: mesh
                .creases()
                .iter()
                .map(|c| CreaseEntry {
                    elements: [c.elem_a, c.elem_b],
                    nodes: [c.node1, c.node2],
                    k_f: c.params.stiffness,
                    theta0: c.params.rest_angle,
                    theta_l: Some(c.params.lower),
                    theta_r: Some(c.params.upper),
                })
                .collect(),
            material: MaterialEntry {
                youngs_modulus: m.youngs_modulus,
                poisson_ratio: m.poisson_ratio,
                thickness: m.thickness,
            },
            bcs,
            prescribed: values(&scene.prescribed),
            forces: values(&scene.forces),
            solver: SolverEntry {
                max_increments: scene.solver.max_increments,
                tolerance: scene.solver.tolerance,
                max_iterations: scene.solver.max_iterations,
                max_recoveries: scene.solver.max_recoveries,
            },
            outputs: OutputEntry {
                tracked_nodes: scene.outputs.tracked_nodes.clone(),
                every: scene.outputs.snapshot_every,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_QUAD: &str = r#"{
        "name": "one_quad",
        "nodes": [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]],
        "elements": [{ "nodes": [0, 1, 2, 3] }],
        "material": { "E": 1e6, "nu": 0.3, "h": 0.01 },
        "bcs": [{ "node": 0, "dofs": ["u", "v", "w"] }]
    }"#;

    const TWO_QUADS: &str = r#"{
        "nodes": [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0], [2, 1, 0]],
        "elements": [{ "nodes": [0, 1, 4, 3], "panel": 0 }, { "nodes": [1, 2, 5, 4], "panel": 1 }],
        "creases": [{ "elements": [0, 1], "nodes": [1, 4], "k_f": 0.1, "theta0": 0.0, "theta_l": 1.0, "theta_r": -1.0 }],
        "material": { "E": 1e6, "nu": 0.3, "h": 0.01 }
    }"#;

    #[test]
    fn minimal_scene() {
        let s = parse_scene_str(ONE_QUAD, "inline").unwrap();
        assert_eq!(s.mesh.total_dofs(), 24);
        assert_eq!(s.name, "one_quad");
        assert_eq!(s.fixed.len(), 3);
        assert_eq!(s.solver, SolverConfig::default());
    }

    #[test]
    fn inverted_limits_are_rejected() {
        match parse_scene_str(TWO_QUADS, "inline") {
            Err(SceneError::Validation { field, message }) => {
                assert_eq!(field, "creases[0].theta_l");
                assert_eq!(message, "θL ≤ θR required");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_are_located() {
        let text = "{\n  \"nodes\": [[0, 0, 0],\n  oops\n}";
        match parse_scene_str(text, "bad.scene") {
            Err(SceneError::Parse { line, origin, .. }) => {
                assert_eq!(line, 3);
                assert_eq!(origin, "bad.scene");
            }
            other => panic!("unexpected {other:?}"),
        }
        let e = parse_scene_str(r#"{"nodes": [], "elements": [], "material": {"E": 1, "nu": 0, "h": 1}, "colour": 1}"#, "x")
            .unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn unknown_dof_names_the_field() {
        let text = ONE_QUAD.replace("\"w\"]", "\"z\"]");
        let e = parse_scene_str(&text, "inline").unwrap_err();
        assert!(e.to_string().contains("bcs[0].dofs"), "{e}");
    }

    #[test]
    fn missing_file() {
        let e = parse_scene(Path::new("/nonexistent/missing.scene")).unwrap_err();
        assert!(e.to_string().ends_with("file not found"));
    }

    #[test]
    fn default_limits_are_filled_in() {
        let text = TWO_QUADS.replace(", \"theta_l\": 1.0, \"theta_r\": -1.0", "");
        let s = parse_scene_str(&text, "inline").unwrap();
        let p = s.mesh.creases()[0].params;
        let (l, r) = default_limits(0.0);
        assert_eq!((p.lower, p.upper), (l, r));
    }
}
