use super::topology::edge_incidence;
use super::SurfaceMesh;

/// Outcome of [`validate`]; failures are recorded rather than raised.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_triangles: usize,
    /// Edges with a single incident triangle.
    pub boundary_edges: Vec<(usize, usize)>,
    /// Edges with more than two incident triangles, with their count.
    pub non_manifold_edges: Vec<(usize, usize, usize)>,
    /// Edges traversed in the same direction by both incident triangles.
    pub orientation_failures: Vec<(usize, usize)>,
    /// Triangles with area below `1e-12` times the mean area.
    pub degenerate_triangles: Vec<usize>,
    pub euler_characteristic: i64,
}

impl ValidationReport {
    pub fn is_closed(&self) -> bool {
        self.boundary_edges.is_empty() && self.non_manifold_edges.is_empty()
    }

    pub fn is_oriented(&self) -> bool {
        self.orientation_failures.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.is_closed() && self.is_oriented() && self.degenerate_triangles.is_empty()
    }

    /// One-line summary of what failed, if anything.
    pub fn summary(&self) -> String {
        if self.is_valid() {
            return format!(
                "valid: V={} E={} F={} chi={}",
                self.num_vertices, self.num_edges, self.num_triangles, self.euler_characteristic
            );
        }
        format!(
            "invalid: {} boundary, {} non-manifold, {} mis-oriented edges, {} degenerate triangles",
            self.boundary_edges.len(),
            self.non_manifold_edges.len(),
            self.orientation_failures.len(),
            self.degenerate_triangles.len()
        )
    }
}

pub fn validate(mesh: &SurfaceMesh) -> ValidationReport {
    let mut report = ValidationReport {
        num_vertices: mesh.num_vertices(),
        num_triangles: mesh.num_triangles(),
        ..Default::default()
    };
    let incidence = edge_incidence(mesh);
    report.num_edges = incidence.len();
    for (&(lo, hi), inc) in &incidence {
        match inc.len() {
            1 => report.boundary_edges.push((lo, hi)),
            2 => {
                if inc[0].1 == inc[1].1 {
                    report.orientation_failures.push((lo, hi));
                }
            }
            n => report.non_manifold_edges.push((lo, hi, n)),
        }
    }
    let mean = mesh.total_area() / mesh.num_triangles().max(1) as f64;
    report.degenerate_triangles = (0..mesh.num_triangles())
        .filter(|&t| mesh.area(t) < 1e-12 * mean)
        .collect();
    report.euler_characteristic =
        report.num_vertices as i64 - report.num_edges as i64 + report.num_triangles as i64;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::icosphere;

    #[test]
    fn icosphere_is_valid() {
        let r = validate(&icosphere(1, 1.0).unwrap());
        assert!(r.is_valid(), "{}", r.summary());
        assert_eq!(r.euler_characteristic, 2);
    }

    #[test]
    fn flipped_triangle_fails_on_three_edges() {
        let m = icosphere(1, 1.0).unwrap();
        let mut tris = m.triangles().to_vec();
        tris[7].swap(1, 2);
        let flipped = SurfaceMesh::new(m.vertices().to_vec(), tris).unwrap();
        let r = validate(&flipped);
        assert!(r.is_closed());
        assert_eq!(r.orientation_failures.len(), 3);
        assert!(!r.is_valid());
    }

    #[test]
    fn duplicated_triangle_is_non_manifold() {
        let m = icosphere(1, 1.0).unwrap();
        let mut tris = m.triangles().to_vec();
        tris.push(tris[3]);
        let dup = SurfaceMesh::new(m.vertices().to_vec(), tris).unwrap();
        let r = validate(&dup);
        assert_eq!(r.non_manifold_edges.len(), 3);
        assert!(r.non_manifold_edges.iter().all(|e| e.2 == 3));
        assert!(!r.is_closed());
    }
}
