//! Galerkin boundary-element solver for time-harmonic scattering by a
//! perfectly conducting closed surface.
//!
//! Everything is discretised with RWG functions only. Four formulations are
//! available: the electric and magnetic field equations, the classical
//! combined field equation, and a regularised combined field equation in
//! which the electric part is premultiplied by the static single-layer
//! operator, `(K + i k² R G⁻¹ T) x = b`.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: closed triangle meshes, icospheres, edge topology, OFF I/O
//! - [`basis`]: RWG functions on interior edges
//! - [`quadrature`]: triangle rules and singular panel-pair integration
//! - [`assembly`]: dense `T`, `K`, `R`, sparse Gram `G`, right-hand sides
//! - [`solve`]: Gram factorisation, formulation operators, GMRES
//! - [`reference`]: Mie series surface current and relative L² error

pub mod assembly;
pub mod basis;
pub mod config;
mod error;
pub mod geometry;
pub mod linalg;
#[cfg(test)]
mod oracle;
pub mod quadrature;
pub mod reference;
pub mod solve;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use assembly::{Excitation, MatrixSet, SystemMatrices};
pub use basis::{RwgBasis, RwgFunction};
pub use config::QuadConfig;
pub use geometry::{icosphere, EdgeTopology, SurfaceMesh, ValidationReport, Vec3};
pub use reference::{relative_error, MieConfig};
pub use solve::{solve_formulation, Formulation, SolveConfig, SolveReport};


