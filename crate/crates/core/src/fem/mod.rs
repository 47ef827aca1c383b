//! Plane frame finite elements for RVE homogenization.
//!
//! Each cell wall becomes a chain of shear-deformable beam elements with a
//! square `t × t` section. The bottom edge is clamped, the top edge is pushed
//! down by 1 % of `H`, and left/right boundary vertices share their
//! translations. The compressive modulus follows from the top reaction.

pub mod element;
mod homogenize;
mod model;
mod solve;

pub use element::{element_stiffness, local_stiffness, FrameElement, Section, SHEAR_CORRECTION};
pub use homogenize::{homogenize, homogenized_modulus, HomogenizationRecord};
pub use model::{
    mesh_geometry, mesh_geometry_with, Dirichlet, Dof, FrameModel, MeshOptions, NodalLoad, Tie, COMPRESSION_STRAIN,
    DEFAULT_MESH_FRACTION, DOFS_PER_NODE, MIN_ELEMENTS_PER_WALL,
};
pub use solve::{assemble_stiffness, solve, SolveResult};
