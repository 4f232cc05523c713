//! Closed triangle meshes and the edge topology RWG functions live on.

mod icosphere;
mod mesh;
pub mod off;
mod topology;
mod validate;
mod vector;

pub use icosphere::{icosphere, MAX_SUBDIVISIONS};
pub use mesh::SurfaceMesh;
pub use off::{read_off, write_off};
pub use topology::{Edge, EdgeTopology};
pub use validate::{validate, ValidationReport};
pub use vector::{CVec3, Vec3};
