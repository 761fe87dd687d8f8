//! Quasi-static origami simulation with bilinear solid-shell panels.
//!
//! Panels are meshed with four-node solid-shell elements whose only degrees
//! of freedom are mid-surface and director displacements. Creases are the
//! lines where two panels share mid-surface nodes but keep independent
//! directors; the fold angle is read off the two director fields and
//! penalised by a quadratic law with logarithmic barriers near full fold.
//!
//! The crate is `no_std` (with `alloc`) so the numerical core can be embedded
//! anywhere; file formats and the command-line driver live in the `orishell`
//! crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod assembly;
pub mod bench;
pub mod crease;
pub mod element;
mod error;
pub mod math;
pub mod mesh;
pub mod scene;
pub mod solver;
pub mod sparse;

pub use error::{Error, Result};
pub use mesh::{CreaseSegment, DofMap, Material, Mesh, QuadElement};
pub use scene::{Component, NodalValue, Scene};
pub use solver::{SolverConfig, Trajectory};
