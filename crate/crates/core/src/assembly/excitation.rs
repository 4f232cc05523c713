use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::RwgBasis;
use crate::geometry::{CVec3, Vec3};
use crate::quadrature::{classify_pair, PairQuadrature, PointTag, TriangleRule};
use crate::solve::Formulation;
use crate::{Error, Result};

const INV_FOUR_PI: f64 = 0.25 * std::f64::consts::FRAC_1_PI;

/// Incident plane wave `E = p·amp·e^{ik d·x}`, `H = √(ε/μ) (d × p)·amp·e^{ik d·x}`
/// in a homogeneous medium, time convention `e^{−iωt}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excitation {
    pub direction: Vec3,
    pub polarisation: Vec3,
    pub amplitude: f64,
    pub wavenumber: f64,
    pub mu: f64,
    pub eps: f64,
    /// Coupling of the classical combined field equation.
    pub alpha: Option<f64>,
}

impl Excitation {
    /// Unit-amplitude wave in vacuum units (`μ = ε = 1`).
    pub fn plane_wave(wavenumber: f64, direction: Vec3, polarisation: Vec3) -> Result<Self> {
        let exc = Self {
            direction,
            polarisation,
            amplitude: 1.0,
            wavenumber,
            mu: 1.0,
            eps: 1.0,
            alpha: None,
        };
        exc.check()?;
        Ok(exc)
    }

    /// `+z` incidence, `x` polarisation.
    pub fn default_wave(wavenumber: f64) -> Result<Self> {
        Self::plane_wave(wavenumber, Vec3::new(0.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 0.0))
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.wavenumber > 0.0) || !self.wavenumber.is_finite() {
            return bad(format!("wavenumber must be positive, got {}", self.wavenumber));
        }
        if (self.direction.norm() - 1.0).abs() > 1e-12 || (self.polarisation.norm() - 1.0).abs() > 1e-12 {
            return bad("direction and polarisation must be unit vectors".into());
        }
        if self.direction.dot(self.polarisation).abs() >= 1e-12 {
            return bad("polarisation must be orthogonal to the direction".into());
        }
        if !(self.mu > 0.0 && self.eps > 0.0) {
            return bad("medium constants must be positive".into());
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        self.wavenumber / (self.mu * self.eps).sqrt()
    }

    #[inline]
    fn phase(&self, x: Vec3) -> Complex64 {
        let (s, c) = (self.wavenumber * self.direction.dot(x)).sin_cos();
        Complex64::new(c, s) * self.amplitude
    }

    pub fn e_field(&self, x: Vec3) -> CVec3 {
        self.polarisation.scale_c(self.phase(x))
    }

    pub fn h_field(&self, x: Vec3) -> CVec3 {
        let hdir = self.direction.cross(self.polarisation) * (self.eps / self.mu).sqrt();
        hdir.scale_c(self.phase(x))
    }
}

/// `(∫ t_i · (n × H) dS, ∫ t_i · E dS)` with the degree-7 rule.
fn tested_fields(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    exc: &Excitation,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mesh = quad.mesh();
    let rule = TriangleRule::new(7).expect("degree 7 exists");
    let mut bh = vec![Complex64::new(0.0, 0.0); basis.len()];
    let mut be = bh.clone();
    for t in 0..mesh.num_triangles() {
        let n = mesh.normal(t);
        let jac = 2.0 * mesh.area(t);
        for (p, w) in rule.points().iter().zip(rule.weights()) {
            let x = mesh.point(t, p[1], p[2]);
            let nxh = CVec3::real_cross(n, &exc.h_field(x));
            let e = exc.e_field(x);
            for f in basis.on_triangle(t) {
                let tv = f.value(x);
                bh[f.index] += nxh.dot_real(tv) * (w * jac);
                be[f.index] += e.dot_real(tv) * (w * jac);
            }
        }
    }
    (bh, be)
}

/// `∬ G⁰(x, y) (n × t_i)(x) · (E × n)(y) dS_y dS_x`.
fn regularised_electric_term(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    exc: &Excitation,
) -> Vec<Complex64> {
    let mesh = quad.mesh();
    let nt = mesh.num_triangles();
    let field = |t: usize, y: Vec3| exc.e_field(y).cross_real(mesh.normal(t));
    let regular: Vec<Vec<CVec3>> = (0..nt)
        .map(|t| quad.rule_points(t).0.iter().map(|&y| field(t, y)).collect())
        .collect();
    let near: Vec<Vec<CVec3>> = (0..nt)
        .map(|t| quad.rule_points(t).1.iter().map(|&y| field(t, y)).collect())
        .collect();

    let per_triangle: Vec<Vec<(usize, Complex64)>> = (0..nt)
        .into_par_iter()
        .map(|a| {
            let fa = basis.on_triangle(a);
            if fa.is_empty() {
                return Vec::new();
            }
            let ca = mesh.centroid(a);
            let na = mesh.normal(a);
            let mut a1 = Complex64::new(0.0, 0.0);
            let mut a2 = CVec3::ZERO;
            for b in 0..nt {
                let class = classify_pair(a, b, mesh);
                quad.visit_tagged(a, b, class, &mut |x, y, w, tag| {
                    let f = match tag {
                        PointTag::Regular(j) => regular[b][j],
                        PointTag::Near(j) => near[b][j],
                        PointTag::Singular => field(b, y),
                    };
                    let g0 = INV_FOUR_PI * w / (x - y).norm();
                    let g0c = Complex64::new(g0, 0.0);
                    a1 += f.dot_real(na.cross(x - ca)) * g0c;
                    a2 = a2.add(&f.scale(g0c));
                });
            }
            fa.iter()
                .map(|f| {
                    let pa = f.opposite - ca;
                    let v = (a1 - a2.dot_real(na.cross(pa))) * (f.sign * f.coef);
                    (f.index, v)
                })
                .collect()
        })
        .collect();
    let mut out = vec![Complex64::new(0.0, 0.0); basis.len()];
    for entries in per_triangle {
        for (i, v) in entries {
            out[i] += v;
        }
    }
    out
}

/// Right-hand side of `formulation` for the incident wave `exc`.
///
/// - `mfie`: `⟨t_i, n × H⟩`
/// - `efie`: `−⟨t_i, E⟩`, matching the system `i k T x = b`
/// - `cfie`: `⟨t_i, n × H⟩ + α ⟨t_i, E⟩`
/// - `regcfie`: `⟨t_i, n × H⟩ − ωε ∬ G⁰ (n × t_i) · (E × n)`
pub fn assemble_excitation(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    exc: &Excitation,
    formulation: Formulation,
) -> Result<Vec<Complex64>> {
    exc.check()?;
    let alpha = match formulation {
        Formulation::Cfie => Some(exc.alpha.ok_or_else(|| {
            Error::InvalidArgument("the combined field equation needs a coupling alpha".into())
        })?),
        _ => None,
    };
    let (bh, be) = tested_fields(quad, basis, exc);
    let b = match formulation {
        Formulation::Mfie => bh,
        Formulation::Efie => be.into_iter().map(|v| -v).collect(),
        Formulation::Cfie => {
            let alpha = alpha.unwrap();
            bh.iter().zip(&be).map(|(h, e)| h + e * alpha).collect()
        }
        Formulation::RegCfie => {
            let scale = exc.omega() * exc.eps;
            let reg = regularised_electric_term(quad, basis, exc);
            bh.iter().zip(&reg).map(|(h, r)| h - r * scale).collect()
        }
    };
    if b.iter().all(|v| v.is_finite()) {
        Ok(b)
    } else {
        Err(Error::NumericalFailure("non-finite right-hand side".into()))
    }
}
