//! Independent reference integrals for tests: closed-form inner integrals
//! over flat triangles combined with composite outer quadrature. Shares no
//! code with the singular transforms it checks.

use num_complex::Complex64;

use crate::geometry::Vec3;
use crate::quadrature::TriangleRule;

const INV_FOUR_PI: f64 = 0.25 * std::f64::consts::FRAC_1_PI;

/// `(∫_T 1/|y−x| dy, ∫_T (y−x)/|y−x| dy)` for `x` in the plane of `T`.
pub fn inplane_potentials(c: [Vec3; 3], x: Vec3) -> (f64, Vec3) {
    let n = (c[1] - c[0]).cross(c[2] - c[0]).normalized();
    let mut phi = 0.0;
    let mut psi = Vec3::ZERO;
    for i in 0..3 {
        let (a, b) = (c[i], c[(i + 1) % 3]);
        let s = (b - a).normalized();
        let m = s.cross(n);
        let p0 = (a - x).dot(m);
        let lp = (b - x).dot(s);
        let lm = (a - x).dot(s);
        let rp = (b - x).norm();
        let rm = (a - x).norm();
        let log_ratio = if p0.abs() > 1e-14 {
            (lp / p0.abs()).asinh() - (lm / p0.abs()).asinh()
        } else {
            0.0
        };
        phi += p0 * log_ratio;
        psi += m * (0.5 * (p0 * p0 * log_ratio + lp * rp - lm * rm));
    }
    (phi, psi)
}

/// Degree-7 rule on each of the `4^levels` congruent subtriangles.
pub fn composite_points(c: [Vec3; 3], levels: u32) -> Vec<(Vec3, f64)> {
    let rule = TriangleRule::new(7).unwrap();
    let mut tris = vec![c];
    for _ in 0..levels {
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [p0, p1, p2] in tris {
            let (m01, m12, m20) = ((p0 + p1) * 0.5, (p1 + p2) * 0.5, (p2 + p0) * 0.5);
            next.extend([[p0, m01, m20], [m01, p1, m12], [m20, m12, p2], [m01, m12, m20]]);
        }
        tris = next;
    }
    let mut out = Vec::with_capacity(tris.len() * rule.len());
    for [p0, p1, p2] in tris {
        let jac = (p1 - p0).cross(p2 - p0).norm();
        for (p, w) in rule.points().iter().zip(rule.weights()) {
            out.push((p0 + (p1 - p0) * p[1] + (p2 - p0) * p[2], w * jac));
        }
    }
    out
}

/// Richardson extrapolation of a sequence converging geometrically in the
/// subdivision level; the rate is estimated from the last three levels.
pub fn richardson(f: impl Fn(u32) -> f64, level: u32) -> f64 {
    let (a, b, c) = (f(level - 2), f(level - 1), f(level));
    let ratio = (c - b) / (b - a);
    if !ratio.is_finite() || ratio <= 0.0 || ratio >= 1.0 {
        return c;
    }
    c + (c - b) * ratio / (1.0 - ratio)
}

/// `∬ (x − pa)·(y − pb) / (4π|x−y|)` and `∬ 1/(4π|x−y|)` for coplanar triangles.
pub fn laplace_linear_coplanar(
    ta: [Vec3; 3],
    tb: [Vec3; 3],
    pa: Vec3,
    pb: Vec3,
    levels: u32,
) -> (f64, f64) {
    let mut lin = 0.0;
    let mut cst = 0.0;
    for (x, w) in composite_points(ta, levels) {
        let (phi, psi) = inplane_potentials(tb, x);
        lin += w * (x - pa).dot(psi + (x - pb) * phi);
        cst += w * phi;
    }
    (lin * INV_FOUR_PI, cst * INV_FOUR_PI)
}

/// Same integrals with the bounded remainder `(e^{ikR} − 1)/(4πR)` as kernel,
/// by plain composite tensor quadrature.
pub fn helmholtz_remainder(
    ta: [Vec3; 3],
    tb: [Vec3; 3],
    pa: Vec3,
    pb: Vec3,
    k: f64,
    levels: u32,
) -> (Complex64, Complex64) {
    let xs = composite_points(ta, levels);
    let ys = composite_points(tb, levels);
    let mut lin = Complex64::new(0.0, 0.0);
    let mut cst = Complex64::new(0.0, 0.0);
    for &(x, wx) in &xs {
        for &(y, wy) in &ys {
            let r = (x - y).norm();
            let g = if r < 1e-12 {
                Complex64::new(0.0, k * INV_FOUR_PI)
            } else {
                (Complex64::new(0.0, k * r).exp() - 1.0) * (INV_FOUR_PI / r)
            };
            let w = wx * wy;
            lin += g * ((x - pa).dot(y - pb) * w);
            cst += g * w;
        }
    }
    (lin, cst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_matches_brute_force_at_interior_point() {
        let c = [Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.2, 0.9, 0.0)];
        // exterior point avoids the singularity, so plain quadrature converges
        let x = Vec3::new(1.3, 0.8, 0.0);
        let (phi, psi) = inplane_potentials(c, x);
        let mut bphi = 0.0;
        let mut bpsi = Vec3::ZERO;
        for (y, w) in composite_points(c, 5) {
            let r = (y - x).norm();
            bphi += w / r;
            bpsi += (y - x) * (w / r);
        }
        assert!((phi - bphi).abs() < 1e-12);
        assert!((psi - bpsi).norm() < 1e-12);
    }

    #[test]
    fn equilateral_self_integral_matches_closed_form() {
        // ∬ 1/R over an equilateral triangle of side 1 is (3/4) ln 3
        let c = [
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.5, 0.75f64.sqrt(), 0.0),
        ];
        let cst = richardson(|l| laplace_linear_coplanar(c, c, Vec3::ZERO, Vec3::ZERO, l).1, 6);
        let exact = 0.75 * 3f64.ln() * INV_FOUR_PI;
        assert!((cst - exact).abs() < 1e-8 * exact, "{cst} vs {exact}");
    }
}
