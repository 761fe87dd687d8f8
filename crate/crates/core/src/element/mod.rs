//! Four-node solid-shell element.
//!
//! Each node carries a mid-surface displacement and a director displacement;
//! there are no rotational DOFs. Transverse shear and thickness strains use
//! assumed-strain interpolation, and thickness integration is done in closed
//! form so only a 2x2 mid-surface rule is needed.

pub mod constitutive;
pub mod energy;
pub mod frame;
pub mod shape;
pub mod strain;

pub use constitutive::{integrated_constitutive, IntegratedConstitutive};
pub use energy::{element_energy, element_force_stiffness, ElementKernel, ElementResponse, EnergyParts, StrainState};
pub use frame::{local_basis, transform_matrices, LocalFrame, Transforms};
pub use shape::shape_functions;
