//! Legacy ASCII VTK snapshots of the deformed mid-surface.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use orishell_core::assembly::Assembler;
use orishell_core::Mesh;

/// File name of the snapshot taken at `increment`.
pub fn snapshot_name(increment: usize) -> String {
    format!("step_{increment:04}.vtk")
}

/// Renders the snapshot text. Reals carry 17 significant digits.
pub fn render_snapshot(assembler: &Assembler<'_>, u: &[f64], title: &str) -> String {
    let mesh = assembler.mesh();
    let x = mesh.deformed_nodes(u);
    let elements = mesh.elements();
    let mut s = String::new();
    s.push_str("# vtk DataFile Version 3.0\n");
    writeln!(s, "{}", title.replace('\n', " ")).unwrap();
    s.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(s, "POINTS {} double", x.len()).unwrap();
    for p in &x {
        writeln!(s, "{:.16e} {:.16e} {:.16e}", p[0], p[1], p[2]).unwrap();
    }
    writeln!(s, "CELLS {} {}", elements.len(), 5 * elements.len()).unwrap();
    for e in elements {
        let [a, b, c, d] = e.nodes;
        writeln!(s, "4 {a} {b} {c} {d}").unwrap();
    }
    writeln!(s, "CELL_TYPES {}", elements.len()).unwrap();
    for _ in elements {
        s.push_str("9\n");
    }
    writeln!(s, "POINT_DATA {}", x.len()).unwrap();
    s.push_str("VECTORS displacement double\n");
    for n in 0..x.len() {
        let d = mesh.dof_map().translation(n);
        writeln!(s, "{:.16e} {:.16e} {:.16e}", u[d[0]], u[d[1]], u[d[2]]).unwrap();
    }
    writeln!(s, "CELL_DATA {}", elements.len()).unwrap();
    s.push_str("SCALARS panel_id int 1\nLOOKUP_TABLE default\n");
    for e in elements {
        writeln!(s, "{}", e.panel).unwrap();
    }
    s.push_str("SCALARS bending_energy_density double 1\nLOOKUP_TABLE default\n");
    for (i, parts) in assembler.element_energies(u).iter().enumerate() {
        writeln!(s, "{:.16e}", parts.bending / mesh.element_area(i)).unwrap();
    }
    s
}

/// Writes `step_XXXX.vtk` into `dir` and returns its path.
pub fn write_snapshot(assembler: &Assembler<'_>, u: &[f64], increment: usize, dir: &Path) -> io::Result<PathBuf> {
    let path = dir.join(snapshot_name(increment));
    let title = format!("orishell increment {increment}");
    fs::write(&path, render_snapshot(assembler, u, &title))?;
    Ok(path)
}

/// Contents of a snapshot as read back by [`read_snapshot`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Snapshot {
    pub points: Vec<[f64; 3]>,
    pub cells: Vec<Vec<usize>>,
    pub cell_types: Vec<u32>,
    pub displacement: Vec<[f64; 3]>,
    pub panel_id: Vec<usize>,
    pub bending_energy_density: Vec<f64>,
}

/// Minimal reader for the files written here.
pub fn read_snapshot(text: &str) -> Result<Snapshot, String> {
    let mut lines = text.lines();
    let mut out = Snapshot::default();
    let header = lines.next().ok_or("empty file")?;
    if header != "# vtk DataFile Version 3.0" {
        return Err(format!("unexpected header `{header}`"));
    }
    let next_nums = |count: usize, lines: &mut std::str::Lines<'_>| -> Result<Vec<String>, String> {
        let mut v = Vec::with_capacity(count);
        while v.len() < count {
            let line = lines.next().ok_or("truncated file")?;
            v.extend(line.split_whitespace().map(str::to_string));
        }
        Ok(v)
    };
    let real = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    let int = |t: &str| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
    let mut scalar_name = String::new();
    while let Some(line) = lines.next() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            ["POINTS", n, _] => {
                let v = next_nums(3 * int(n)?, &mut lines)?;
                for c in v.chunks(3) {
                    out.points.push([real(&c[0])?, real(&c[1])?, real(&c[2])?]);
                }
            }
            ["CELLS", n, _] => {
                for _ in 0..int(n)? {
                    let line = lines.next().ok_or("truncated cells")?;
                    let ids = line.split_whitespace().map(int).collect::<Result<Vec<_>, _>>()?;
                    out.cells.push(ids[1..].to_vec());
                }
            }
            ["CELL_TYPES", n] => {
                for t in next_nums(int(n)?, &mut lines)? {
                    out.cell_types.push(t.parse().map_err(|_| format!("bad cell type `{t}`"))?);
                }
            }
            ["VECTORS", "displacement", _] => {
                let v = next_nums(3 * out.points.len(), &mut lines)?;
                for c in v.chunks(3) {
                    out.displacement.push([real(&c[0])?, real(&c[1])?, real(&c[2])?]);
                }
            }
            ["SCALARS", name, ..] => scalar_name = name.to_string(),
            ["LOOKUP_TABLE", _] => {
                let v = next_nums(out.cells.len(), &mut lines)?;
                match scalar_name.as_str() {
                    "panel_id" => out.panel_id = v.iter().map(|t| int(t)).collect::<Result<_, _>>()?,
                    "bending_energy_density" => {
                        out.bending_energy_density = v.iter().map(|t| real(t)).collect::<Result<_, _>>()?
                    }
                    other => return Err(format!("unknown scalar field `{other}`")),
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

/// Mesh helper for tests and callers that only hold a mesh.
pub fn write_mesh_snapshot(mesh: &Mesh, u: &[f64], increment: usize, dir: &Path) -> io::Result<PathBuf> {
    let assembler = Assembler::new(mesh).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    write_snapshot(&assembler, u, increment, dir)
}
