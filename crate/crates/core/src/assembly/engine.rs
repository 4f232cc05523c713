//! Panel-pair loop shared by the dense operators.
//!
//! For each ordered pair of triangles the quadrature points are visited once
//! and reduced to a handful of polynomial moments of the kernel; the up to
//! nine RWG interactions of the pair are then closed-form combinations of
//! those moments. Coordinates are taken relative to the panel centroids to
//! keep the moment combinations free of cancellation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::RwgBasis;
use crate::geometry::Vec3;
use crate::linalg::DenseMatrix;
use crate::quadrature::{classify_pair, PairQuadrature, PanelPairClass};
use crate::{Error, Result};

use super::MatrixSet;

const INV_FOUR_PI: f64 = 0.25 * std::f64::consts::FRAC_1_PI;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Test triangles processed per parallel batch; batches are merged in order,
/// which keeps the result independent of the worker count.
const BATCH: usize = 64;

#[derive(Default, Clone, Copy)]
struct HelmholtzMoments {
    m0: Complex64,
    mx: [Complex64; 3],
    my: [Complex64; 3],
    mxy: Complex64,
    // gradient-kernel moments for the magnetic operator
    e: [Complex64; 3],
    c: [Complex64; 3],
    xe: Complex64,
    z: [Complex64; 3],
}

#[derive(Default, Clone, Copy)]
struct LaplaceMoments {
    l0: f64,
    lx: Vec3,
    ly: Vec3,
    lxy: f64,
    p: f64,
}

#[inline]
fn cdot3(a: &[Complex64; 3], v: Vec3) -> Complex64 {
    a[0] * v.0[0] + a[1] * v.0[1] + a[2] * v.0[2]
}

/// `a × v` for complex `a`, real `v`.
#[inline]
fn ccross(a: &[Complex64; 3], v: Vec3) -> [Complex64; 3] {
    [
        a[1] * v.0[2] - a[2] * v.0[1],
        a[2] * v.0[0] - a[0] * v.0[2],
        a[0] * v.0[1] - a[1] * v.0[0],
    ]
}

/// Rows of one test triangle: up to three RWG functions times all columns.
struct RowBlock {
    rows: Vec<usize>,
    t: Vec<Complex64>,
    k: Vec<Complex64>,
    r: Vec<f64>,
}

pub(super) struct DenseOperators {
    pub t: Option<DenseMatrix<Complex64>>,
    pub k: Option<DenseMatrix<Complex64>>,
    pub r: Option<DenseMatrix<f64>>,
}

pub(super) fn assemble_dense(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    wavenumber: f64,
    set: MatrixSet,
) -> Result<DenseOperators> {
    let mesh = quad.mesh();
    let n = basis.len();
    let nt = mesh.num_triangles();
    let mut t = set.efio.then(|| DenseMatrix::zeros(n, n));
    let mut k = set.mfio.then(|| DenseMatrix::zeros(n, n));
    let mut r = set.regulariser.then(|| DenseMatrix::zeros(n, n));

    for start in (0..nt).step_by(BATCH) {
        let end = (start + BATCH).min(nt);
        let blocks: Vec<RowBlock> = (start..end)
            .into_par_iter()
            .map(|a| row_block(quad, basis, wavenumber, set, a))
            .collect();
        for block in blocks {
            for (li, &row) in block.rows.iter().enumerate() {
                let span = li * n..(li + 1) * n;
                if let Some(m) = t.as_mut() {
                    for (dst, src) in m.row_mut(row).iter_mut().zip(&block.t[span.clone()]) {
                        *dst += src;
                    }
                }
                if let Some(m) = k.as_mut() {
                    for (dst, src) in m.row_mut(row).iter_mut().zip(&block.k[span.clone()]) {
                        *dst += src;
                    }
                }
                if let Some(m) = r.as_mut() {
                    for (dst, src) in m.row_mut(row).iter_mut().zip(&block.r[span]) {
                        *dst += src;
                    }
                }
            }
        }
    }

    let finite_c = |m: &DenseMatrix<Complex64>| m.as_slice().iter().all(|v| v.is_finite());
    let finite_r = |m: &DenseMatrix<f64>| m.as_slice().iter().all(|v| v.is_finite());
    if !t.as_ref().is_none_or(finite_c)
        || !k.as_ref().is_none_or(finite_c)
        || !r.as_ref().is_none_or(finite_r)
    {
        return Err(Error::NumericalFailure(
            "non-finite operator entry; check the mesh for degenerate panels".into(),
        ));
    }
    Ok(DenseOperators { t, k, r })
}

fn row_block(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    wavenumber: f64,
    set: MatrixSet,
    a: usize,
) -> RowBlock {
    let mesh = quad.mesh();
    let n = basis.len();
    let fa = basis.on_triangle(a);
    let nloc = fa.len();
    let mut block = RowBlock {
        rows: fa.iter().map(|f| f.index).collect(),
        t: if set.efio { vec![ZERO; nloc * n] } else { Vec::new() },
        k: if set.mfio { vec![ZERO; nloc * n] } else { Vec::new() },
        r: if set.regulariser { vec![0.0; nloc * n] } else { Vec::new() },
    };
    if nloc == 0 {
        return block;
    }
    let ca = mesh.centroid(a);
    let na = mesh.normal(a);
    let helmholtz = set.efio || set.mfio;
    let inv_k2 = 1.0 / (wavenumber * wavenumber);

    for b in 0..mesh.num_triangles() {
        let fb = basis.on_triangle(b);
        if fb.is_empty() {
            continue;
        }
        let class = classify_pair(a, b, mesh);
        // flat panels: the gradient kernel has no coincident contribution
        let grad = set.mfio && class != PanelPairClass::Coincident;
        let cb = mesh.centroid(b);
        let nb = mesh.normal(b);
        let mut hm = HelmholtzMoments::default();
        let mut lm = LaplaceMoments::default();

        quad.visit_classified(a, b, class, &mut |x, y, w| {
            let d = x - y;
            let rr = d.norm();
            let xl = x - ca;
            let yl = y - cb;
            let xy = xl.dot(yl);
            if helmholtz {
                let (s, c) = (wavenumber * rr).sin_cos();
                let inv_r = 1.0 / rr;
                let g = Complex64::new(c, s) * (INV_FOUR_PI * inv_r * w);
                if set.efio {
                    hm.m0 += g;
                    for i in 0..3 {
                        hm.mx[i] += g * xl.0[i];
                        hm.my[i] += g * yl.0[i];
                    }
                    hm.mxy += g * xy;
                }
                if grad {
                    // ∇ₓG = G (ikR − 1) / R² · (x − y)
                    let h = g * Complex64::new(-1.0, wavenumber * rr) * (inv_r * inv_r);
                    let cv = [h * d.0[0], h * d.0[1], h * d.0[2]];
                    let ev = ccross(&cv, yl);
                    let xn = xl.cross(na);
                    for i in 0..3 {
                        hm.c[i] += cv[i];
                        hm.e[i] += ev[i];
                    }
                    hm.xe += cdot3(&ev, xn);
                    // xn × cv
                    hm.z[0] += cv[2] * xn.0[1] - cv[1] * xn.0[2];
                    hm.z[1] += cv[0] * xn.0[2] - cv[2] * xn.0[0];
                    hm.z[2] += cv[1] * xn.0[0] - cv[0] * xn.0[1];
                }
            }
            if set.regulariser {
                let g0 = INV_FOUR_PI * w / rr;
                lm.l0 += g0;
                lm.lx += xl * g0;
                lm.ly += yl * g0;
                lm.lxy += g0 * xy;
                lm.p += g0 * na.dot(yl) * nb.dot(xl);
            }
        });

        let nanb = na.dot(nb);
        for (li, alpha) in fa.iter().enumerate() {
            let pa = alpha.opposite - ca;
            let pan = pa.cross(na);
            for beta in fb {
                let pb = beta.opposite - cb;
                let ss = alpha.sign * beta.sign * alpha.coef * beta.coef;
                let col = li * n + beta.index;
                if set.efio {
                    let uv = hm.mxy - cdot3(&hm.my, pa) - cdot3(&hm.mx, pb) + hm.m0 * pa.dot(pb);
                    block.t[col] += (uv - hm.m0 * (4.0 * inv_k2)) * ss;
                }
                if grad {
                    let v = hm.xe - cdot3(&hm.e, pan) - cdot3(&hm.z, pb)
                        + cdot3(&ccross(&hm.c, pb), pan);
                    block.k[col] -= v * ss;
                }
                if set.regulariser {
                    let uv = lm.lxy - pa.dot(lm.ly) - lm.lx.dot(pb) + lm.l0 * pa.dot(pb);
                    let nvnu = lm.p
                        - nb.dot(pa) * na.dot(lm.ly)
                        - na.dot(pb) * nb.dot(lm.lx)
                        + na.dot(pb) * nb.dot(pa) * lm.l0;
                    block.r[col] -= ss * (nanb * uv - nvnu);
                }
            }
        }
    }
    block
}
