use crate::basis::RwgBasis;
use crate::geometry::SurfaceMesh;
use crate::linalg::SparseMatrix;
use crate::quadrature::TriangleRule;
use crate::Result;

/// RWG mass matrix `G_ij = ∫ t_i · t_j dS`.
///
/// The integrand is quadratic on each triangle, so the degree-3 rule is exact.
pub fn assemble_g(mesh: &SurfaceMesh, basis: &RwgBasis) -> SparseMatrix {
    assemble_g_with_rule(mesh, basis, &TriangleRule::new(3).expect("degree 3 exists"))
}

pub fn assemble_g_with_degree(mesh: &SurfaceMesh, basis: &RwgBasis, degree: u32) -> Result<SparseMatrix> {
    Ok(assemble_g_with_rule(mesh, basis, &TriangleRule::new(degree)?))
}

fn assemble_g_with_rule(mesh: &SurfaceMesh, basis: &RwgBasis, rule: &TriangleRule) -> SparseMatrix {
    let mut triplets = Vec::with_capacity(9 * mesh.num_triangles());
    for t in 0..mesh.num_triangles() {
        let fs = basis.on_triangle(t);
        let jac = 2.0 * mesh.area(t);
        for fi in fs {
            for fj in fs {
                let v: f64 = rule
                    .points()
                    .iter()
                    .zip(rule.weights())
                    .map(|(p, w)| {
                        let x = mesh.point(t, p[1], p[2]);
                        w * fi.value(x).dot(fj.value(x))
                    })
                    .sum();
                triplets.push((fi.index, fj.index, v * jac));
            }
        }
    }
    SparseMatrix::from_triplets(basis.len(), triplets)
}
