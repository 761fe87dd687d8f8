//! File formats, benchmark drivers and the `orishell` command line on top of
//! [`orishell_core`].

pub mod check;
pub mod cli;
pub mod curves;
pub mod runs;
pub mod scene_file;
pub mod vtk;

pub use scene_file::{parse_scene, parse_scene_str, serialize_scene, SceneError};
