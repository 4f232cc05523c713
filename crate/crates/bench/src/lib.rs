//! Benchmark fixtures.

use cfie_core::{icosphere, RwgBasis, SurfaceMesh};

pub fn sphere(level: u32) -> (SurfaceMesh, RwgBasis) {
    let mesh = icosphere(level, 1.0).expect("level within limits");
    let basis = RwgBasis::from_mesh(&mesh).expect("icospheres are closed");
    (mesh, basis)
}
