use crate::{Error, Result};

use super::Vec3;

/// Oriented triangle mesh with per-triangle geometry precomputed.
///
/// Triangles are stored as vertex index triples; the normal of a triangle is
/// `(v1 - v0) × (v2 - v0)` normalised, so a closed mesh oriented
/// counter-clockwise seen from outside has outward normals.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    areas: Vec<f64>,
    normals: Vec<Vec3>,
    centroids: Vec<Vec3>,
    diameters: Vec<f64>,
}

impl SurfaceMesh {
    /// Builds a mesh and precomputes areas, normals, centroids and diameters.
    ///
    /// Only index bounds and non-zero areas are checked here; closedness and
    /// orientation are the business of [`super::validate`].
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut normals = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        let mut diameters = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&i| i >= nv) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references vertex {bad}, but only {nv} vertices exist"
                )));
            }
            let [p0, p1, p2] = tri.map(|i| vertices[i]);
            let c = (p1 - p0).cross(p2 - p0);
            let twice_area = c.norm();
            if !(twice_area > 0.0) || !twice_area.is_finite() {
                return Err(Error::InvalidMesh(format!("triangle {t} has zero area")));
            }
            areas.push(0.5 * twice_area);
            normals.push(c * (1.0 / twice_area));
            centroids.push((p0 + p1 + p2) * (1.0 / 3.0));
            diameters.push(
                (p1 - p0)
                    .norm()
                    .max((p2 - p1).norm())
                    .max((p0 - p2).norm()),
            );
        }
        Ok(Self {
            vertices,
            triangles,
            areas,
            normals,
            centroids,
            diameters,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    #[inline]
    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.triangles[t]
    }

    /// Corner positions of triangle `t` in stored order.
    #[inline]
    pub fn corners(&self, t: usize) -> [Vec3; 3] {
        self.triangles[t].map(|i| self.vertices[i])
    }

    #[inline]
    pub fn area(&self, t: usize) -> f64 {
        self.areas[t]
    }

    #[inline]
    pub fn normal(&self, t: usize) -> Vec3 {
        self.normals[t]
    }

    #[inline]
    pub fn centroid(&self, t: usize) -> Vec3 {
        self.centroids[t]
    }

    /// Longest edge of triangle `t`.
    #[inline]
    pub fn diameter(&self, t: usize) -> f64 {
        self.diameters[t]
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Largest deviation of `|v|` from `radius` over all vertices.
    pub fn max_radius_deviation(&self, radius: f64) -> f64 {
        self.vertices
            .iter()
            .map(|v| (v.norm() - radius).abs())
            .fold(0.0, f64::max)
    }

    /// Maps barycentric coordinates `(l1, l2)` relative to corners 1 and 2 to a point.
    #[inline]
    pub fn point(&self, t: usize, l1: f64, l2: f64) -> Vec3 {
        let [p0, p1, p2] = self.corners(t);
        p0 + (p1 - p0) * l1 + (p2 - p0) * l2
    }
}
