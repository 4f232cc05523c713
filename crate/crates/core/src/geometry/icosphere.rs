use std::collections::HashMap;

use crate::{Error, Result};

use super::{SurfaceMesh, Vec3};

/// Largest accepted subdivision level; level 7 already has 327 680 triangles.
pub const MAX_SUBDIVISIONS: u32 = 7;

const ICOSAHEDRON_FACES: [[usize; 3]; 20] = [
    [0, 11, 5],
    [0, 5, 1],
    [0, 1, 7],
    [0, 7, 10],
    [0, 10, 11],
    [1, 5, 9],
    [5, 11, 4],
    [11, 10, 2],
    [10, 7, 6],
    [7, 1, 8],
    [3, 9, 4],
    [3, 4, 2],
    [3, 2, 6],
    [3, 6, 8],
    [3, 8, 9],
    [4, 9, 5],
    [2, 4, 11],
    [6, 2, 10],
    [8, 6, 7],
    [9, 8, 1],
];

fn icosahedron(radius: f64) -> (Vec<Vec3>, Vec<[usize; 3]>) {
    let phi = 0.5 * (1.0 + 5f64.sqrt());
    let raw = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ];
    let vertices = raw
        .iter()
        .map(|&(x, y, z)| Vec3::new(x, y, z).normalized() * radius)
        .collect();
    (vertices, ICOSAHEDRON_FACES.to_vec())
}

/// Origin-centred icosphere with `20 · 4^subdivisions` outward-oriented triangles.
///
/// Each level splits every triangle into four through its edge midpoints and
/// pushes the new vertices back onto the sphere.
pub fn icosphere(subdivisions: u32, radius: f64) -> Result<SurfaceMesh> {
    if subdivisions > MAX_SUBDIVISIONS {
        return Err(Error::ResourceLimit(format!(
            "icosphere subdivision level {subdivisions} exceeds the maximum of {MAX_SUBDIVISIONS}"
        )));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "icosphere radius must be positive, got {radius}"
        )));
    }
    let (mut vertices, mut faces) = icosahedron(radius);
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3 / 2);
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut mid = |a: usize, b: usize, vertices: &mut Vec<Vec3>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let m = (vertices[a] + vertices[b]).normalized() * radius;
                vertices.push(m);
                vertices.len() - 1
            })
        };
        for &[a, b, c] in &faces {
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([ab, b, bc]);
            next.push([ca, bc, c]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    SurfaceMesh::new(vertices, faces)
}
