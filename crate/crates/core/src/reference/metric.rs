use num_complex::Complex64;

use crate::assembly::assemble_g;
use crate::basis::RwgBasis;
use crate::geometry::{CVec3, SurfaceMesh};
use crate::quadrature::TriangleRule;
use crate::solve::GramFactor;
use crate::{Error, Result};

use super::mie::{MieConfig, MieSeries};

/// Mie current at the degree-3 rule points, triangle by triangle.
fn reference_at_points(mesh: &SurfaceMesh, series: &MieSeries, rule: &TriangleRule) -> Vec<CVec3> {
    let r = series.config().radius;
    (0..mesh.num_triangles())
        .flat_map(|t| {
            rule.points()
                .iter()
                .map(move |p| mesh.point(t, p[1], p[2]))
                .collect::<Vec<_>>()
        })
        .map(|x| series.current(x.normalized() * r))
        .collect()
}

fn degree3() -> TriangleRule {
    TriangleRule::new(3).expect("degree 3 exists")
}

/// `‖Σ xᵢ tᵢ − J‖ / ‖J‖` in the surface L² norm, `J` the Mie current at the
/// radial projection of each quadrature point.
pub fn relative_error(x: &[Complex64], mesh: &SurfaceMesh, basis: &RwgBasis, cfg: &MieConfig) -> Result<f64> {
    if x.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            got: x.len(),
        });
    }
    cfg.check()?;
    let series = MieSeries::new(cfg)?;
    let rule = degree3();
    let reference = reference_at_points(mesh, &series, &rule);
    let np = rule.len();
    let (mut num, mut den) = (0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let jac = 2.0 * mesh.area(t);
        for (q, (p, w)) in rule.points().iter().zip(rule.weights()).enumerate() {
            let pt = mesh.point(t, p[1], p[2]);
            let j = &reference[t * np + q];
            let jn = basis.current_at(x, t, pt);
            num += w * jac * jn.sub(j).norm_sq();
            den += w * jac * j.norm_sq();
        }
    }
    Ok((num / den).sqrt())
}

/// Coefficients of the L² projection of the Mie current onto the RWG space,
/// the best approximation in the norm used by [`relative_error`].
pub fn l2_projection(mesh: &SurfaceMesh, basis: &RwgBasis, cfg: &MieConfig) -> Result<Vec<Complex64>> {
    cfg.check()?;
    let series = MieSeries::new(cfg)?;
    let rule = degree3();
    let reference = reference_at_points(mesh, &series, &rule);
    let np = rule.len();
    let mut b = vec![Complex64::new(0.0, 0.0); basis.len()];
    for t in 0..mesh.num_triangles() {
        let jac = 2.0 * mesh.area(t);
        for (q, (p, w)) in rule.points().iter().zip(rule.weights()).enumerate() {
            let pt = mesh.point(t, p[1], p[2]);
            for f in basis.on_triangle(t) {
                b[f.index] += reference[t * np + q].dot_real(f.value(pt)) * (w * jac);
            }
        }
    }
    GramFactor::new(&assemble_g(mesh, basis))?.solve_in_place(&mut b)?;
    Ok(b)
}
