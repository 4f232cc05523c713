//! Plane-wave scattering by a perfectly conducting sphere.
//!
//! In the frame `e₁ = p`, `e₂ = d × p`, `e₃ = d` the surface current
//! `J = r̂ × H` at size parameter `x = ka` is
//!
//! ```text
//! J_θ = −(cos φ / x) Σ Eₙ [ i τₙ / ξ′ₙ − πₙ / ξₙ ]
//! J_φ =  (sin φ / x) Σ Eₙ [ i πₙ / ξ′ₙ − τₙ / ξₙ ],   Eₙ = iⁿ (2n+1) / (n(n+1))
//! ```
//!
//! with Riccati-Hankel functions `ξₙ = ψₙ + i ζₙ`, `ψₙ = x jₙ(x)`,
//! `ζₙ = x yₙ(x)`, and the angular functions `πₙ`, `τₙ` of `cos θ`.
//! In the limit `ka → 0` this tends to `1.5 r̂ × (d × p)`.

use num_complex::Complex64;

use crate::geometry::{CVec3, Vec3};
use crate::quadrature::gauss_legendre;
use crate::{Error, Result};

/// Series length recommended for size parameter `ka`.
pub fn truncation_rule(ka: f64) -> usize {
    (ka + 4.0 * ka.cbrt() + 10.0).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MieConfig {
    /// Size parameter `k · radius`.
    pub ka: f64,
    pub radius: f64,
    /// Number of series terms.
    pub n_terms: usize,
    pub direction: Vec3,
    pub polarisation: Vec3,
    /// Magnitude of the incident magnetic field.
    pub amplitude: f64,
}

impl MieConfig {
    /// Unit sphere, `+z` incidence, `x` polarisation, series length from the rule.
    pub fn new(ka: f64) -> Self {
        Self {
            ka,
            radius: 1.0,
            n_terms: truncation_rule(ka.max(0.0)),
            direction: Vec3::new(0.0, 0.0, 1.0),
            polarisation: Vec3::new(1.0, 0.0, 0.0),
            amplitude: 1.0,
        }
    }

    pub fn with_frame(mut self, direction: Vec3, polarisation: Vec3) -> Self {
        self.direction = direction;
        self.polarisation = polarisation;
        self
    }

    pub fn with_terms(mut self, n_terms: usize) -> Self {
        self.n_terms = n_terms;
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }

    pub fn wavenumber(&self) -> f64 {
        self.ka / self.radius
    }

    /// Frame and parameter checks, without the truncation rule.
    fn check_frame(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.ka > 0.0 && self.ka.is_finite()) {
            return bad(format!("size parameter must be positive, got {}", self.ka));
        }
        if !(self.radius > 0.0) {
            return bad(format!("radius must be positive, got {}", self.radius));
        }
        if self.n_terms == 0 {
            return bad("at least one series term is required".into());
        }
        if (self.direction.norm() - 1.0).abs() > 1e-12
            || (self.polarisation.norm() - 1.0).abs() > 1e-12
            || self.direction.dot(self.polarisation).abs() >= 1e-12
        {
            return bad("direction and polarisation must be orthonormal".into());
        }
        Ok(())
    }

    pub fn check(&self) -> Result<()> {
        self.check_frame()?;
        let need = truncation_rule(self.ka);
        if self.n_terms < need {
            return Err(Error::InvalidArgument(format!(
                "{} series terms at ka = {} is below the required {need}",
                self.n_terms, self.ka
            )));
        }
        Ok(())
    }
}

/// `ψₙ`, `ξₙ` and their derivatives for `n = 0..=n_max`.
pub(crate) struct RiccatiBessel {
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub xi: Vec<Complex64>,
    pub dxi: Vec<Complex64>,
}

pub(crate) fn riccati_bessel(x: f64, n_max: usize) -> RiccatiBessel {
    // logarithmic derivative of ψ, downward from well above n_max
    let start = n_max.max(x.ceil() as usize) + 16 + (x.sqrt() * 4.0) as usize;
    let mut d = vec![0.0; start + 1];
    for n in (1..=start).rev() {
        let nx = n as f64 / x;
        d[n - 1] = nx - 1.0 / (d[n] + nx);
    }
    let mut psi = vec![0.0; n_max + 1];
    psi[0] = x.sin();
    for n in 1..=n_max {
        psi[n] = psi[n - 1] / (d[n] + n as f64 / x);
    }
    // ζₙ = x yₙ(x) upward
    let mut zeta = vec![0.0; n_max + 1];
    let mut prev = x.sin();
    zeta[0] = -x.cos();
    for n in 1..=n_max {
        let next = (2 * n - 1) as f64 / x * zeta[n - 1] - prev;
        prev = zeta[n - 1];
        zeta[n] = next;
    }
    let xi: Vec<Complex64> = psi.iter().zip(&zeta).map(|(&p, &z)| Complex64::new(p, z)).collect();
    let mut dpsi = vec![0.0; n_max + 1];
    let mut dxi = vec![Complex64::new(0.0, 0.0); n_max + 1];
    dpsi[0] = x.cos();
    dxi[0] = Complex64::new(x.cos(), x.sin());
    for n in 1..=n_max {
        let nx = n as f64 / x;
        dpsi[n] = psi[n - 1] - nx * psi[n];
        dxi[n] = xi[n - 1] - xi[n] * nx;
    }
    RiccatiBessel { psi, dpsi, xi, dxi }
}

/// `πₙ(μ)`, `τₙ(μ)` for `n = 1..=n_max` (index 0 unused).
fn angular(mu: f64, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pi = vec![0.0; n_max + 1];
    let mut tau = vec![0.0; n_max + 1];
    if n_max >= 1 {
        pi[1] = 1.0;
        tau[1] = mu;
    }
    for n in 2..=n_max {
        let nf = n as f64;
        pi[n] = ((2.0 * nf - 1.0) * mu * pi[n - 1] - nf * pi[n - 2]) / (nf - 1.0);
        tau[n] = nf * mu * pi[n] - (nf + 1.0) * pi[n - 1];
    }
    (pi, tau)
}

/// `iⁿ`.
fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Precomputed series coefficients of one configuration.
#[derive(Debug, Clone)]
pub struct MieSeries {
    cfg: MieConfig,
    /// `i Eₙ / ξ′ₙ`
    c_prime: Vec<Complex64>,
    /// `Eₙ / ξₙ`
    c_plain: Vec<Complex64>,
    /// `aₙ = ψ′ₙ/ξ′ₙ`, `bₙ = ψₙ/ξₙ`
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    e2: Vec3,
}

impl MieSeries {
    /// Checks the frame but not the series length, so truncated series can be studied.
    pub fn new(cfg: &MieConfig) -> Result<Self> {
        cfg.check_frame()?;
        let n = cfg.n_terms;
        let x = cfg.ka;
        let rb = riccati_bessel(x, n);
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n + 1];
        let mut c_plain = c_prime.clone();
        let mut a = c_prime.clone();
        let mut b = c_prime.clone();
        for k in 1..=n {
            let kf = k as f64;
            let en = i_pow(k) * ((2.0 * kf + 1.0) / (kf * (kf + 1.0)));
            c_prime[k] = Complex64::i() * en / rb.dxi[k];
            c_plain[k] = en / rb.xi[k];
            a[k] = rb.dpsi[k] / rb.dxi[k];
            b[k] = rb.psi[k] / rb.xi[k];
        }
        if c_prime.iter().chain(&c_plain).any(|c| !c.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "Mie coefficients overflow at ka = {x} with {n} terms"
            )));
        }
        Ok(Self {
            cfg: *cfg,
            c_prime,
            c_plain,
            a,
            b,
            e2: cfg.direction.cross(cfg.polarisation),
        })
    }

    pub fn config(&self) -> &MieConfig {
        &self.cfg
    }

    /// Current at the radial projection of `point` onto the sphere.
    pub fn current(&self, point: Vec3) -> CVec3 {
        let cfg = &self.cfg;
        let (e1, e2, e3) = (cfg.polarisation, self.e2, cfg.direction);
        let u = point.normalized();
        let (u1, u2, u3) = (u.dot(e1), u.dot(e2), u.dot(e3).clamp(-1.0, 1.0));
        let theta = u3.acos();
        let phi = u2.atan2(u1);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let (pi, tau) = angular(ct, cfg.n_terms);
        let mut s_theta = Complex64::new(0.0, 0.0);
        let mut s_phi = Complex64::new(0.0, 0.0);
        for n in 1..=cfg.n_terms {
            s_theta += self.c_prime[n] * tau[n] - self.c_plain[n] * pi[n];
            s_phi += self.c_prime[n] * pi[n] - self.c_plain[n] * tau[n];
        }
        let scale = cfg.amplitude / cfg.ka;
        let j_theta = s_theta * (-cp * scale);
        let j_phi = s_phi * (sp * scale);
        let theta_hat = e1 * (ct * cp) + e2 * (ct * sp) - e3 * st;
        let phi_hat = e2 * cp - e1 * sp;
        theta_hat.scale_c(j_theta).add(&phi_hat.scale_c(j_phi))
    }

    /// Scattering cross-section from the coefficient sum `(2π/k²) Σ (2n+1)(|aₙ|² + |bₙ|²)`.
    pub fn cross_section_series(&self) -> f64 {
        let k = self.cfg.wavenumber();
        let s: f64 = (1..=self.cfg.n_terms)
            .map(|n| (2 * n + 1) as f64 * (self.a[n].norm_sqr() + self.b[n].norm_sqr()))
            .sum();
        2.0 * std::f64::consts::PI / (k * k) * s
    }

    /// Scattering cross-section by integrating the far-field amplitudes over angle.
    pub fn cross_section_far_field(&self) -> f64 {
        let k = self.cfg.wavenumber();
        let n = self.cfg.n_terms;
        let mut total = 0.0;
        for (t, w) in gauss_legendre(n + 16) {
            let mu = 2.0 * t - 1.0;
            let (pi, tau) = angular(mu, n);
            let mut s1 = Complex64::new(0.0, 0.0);
            let mut s2 = Complex64::new(0.0, 0.0);
            for m in 1..=n {
                let mf = m as f64;
                let c = (2.0 * mf + 1.0) / (mf * (mf + 1.0));
                s1 += (self.a[m] * pi[m] + self.b[m] * tau[m]) * c;
                s2 += (self.a[m] * tau[m] + self.b[m] * pi[m]) * c;
            }
            total += 2.0 * w * (s1.norm_sqr() + s2.norm_sqr());
        }
        std::f64::consts::PI / (k * k) * total
    }
}

/// Surface current density at a point of the sphere.
pub fn mie_surface_current(cfg: &MieConfig, point: Vec3) -> Result<CVec3> {
    cfg.check()?;
    let r = point.norm();
    if (r - cfg.radius).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "point at radius {r} is not on the sphere of radius {}",
            cfg.radius
        )));
    }
    Ok(MieSeries::new(cfg)?.current(point))
}
