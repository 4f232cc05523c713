use crate::geometry::Vec3;
use crate::{Error, Result};

use super::mie::{MieConfig, MieSeries};

const CROSS_SECTION_TOL: f64 = 1e-8;
const TAIL_TOL: f64 = 1e-8;
const RAYLEIGH_TOL: f64 = 0.05;
/// Largest size parameter at which the low-frequency pattern is checked.
const RAYLEIGH_MAX_KA: f64 = 0.05;

/// Outcome of the oracle consistency checks for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct MieDiagnostics {
    pub ka: f64,
    pub n_terms: usize,
    pub cross_section_series: f64,
    pub cross_section_far_field: f64,
    pub cross_section_rel_diff: f64,
    /// Largest relative change of the current at sample points when the
    /// series length is doubled.
    pub tail_rel_change: f64,
    /// `|J(pole)| / |J(equator, φ = π/4)|`, only at small `ka` (limit `√2`).
    pub rayleigh_ratio: Option<f64>,
    pub passed: bool,
}

impl MieDiagnostics {
    pub fn summary(&self) -> String {
        let rayleigh = self
            .rayleigh_ratio
            .map_or(String::new(), |r| format!(", pole/equator ratio {r:.6}"));
        format!(
            "ka = {}, {} terms: cross-section mismatch {:.2e}, tail change {:.2e}{rayleigh}: {}",
            self.ka,
            self.n_terms,
            self.cross_section_rel_diff,
            self.tail_rel_change,
            if self.passed { "ok" } else { "FAILED" }
        )
    }
}

/// Sample directions spread over the sphere, in the frame of `cfg`.
fn sample_points(cfg: &MieConfig) -> Vec<Vec3> {
    let e3 = cfg.direction;
    let e1 = cfg.polarisation;
    let e2 = e3.cross(e1);
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..20)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / 20.0;
            let r = (1.0 - z * z).sqrt();
            let (s, c) = (golden * i as f64).sin_cos();
            (e1 * (r * c) + e2 * (r * s) + e3 * z) * cfg.radius
        })
        .collect()
}

/// Runs the checks without turning a failure into an error.
pub fn mie_diagnostics(cfg: &MieConfig) -> Result<MieDiagnostics> {
    let series = MieSeries::new(cfg)?;
    let doubled = MieSeries::new(&cfg.with_terms(2 * cfg.n_terms))?;

    let cs = series.cross_section_series();
    let cf = series.cross_section_far_field();
    let cs_diff = (cs - cf).abs() / cs.abs().max(f64::MIN_POSITIVE);

    let tail = sample_points(cfg)
        .into_iter()
        .map(|p| {
            let j = series.current(p);
            let j2 = doubled.current(p);
            j.sub(&j2).norm() / j2.norm().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);

    let rayleigh_ratio = (cfg.ka <= RAYLEIGH_MAX_KA).then(|| {
        let e1 = cfg.polarisation;
        let e2 = cfg.direction.cross(e1);
        let pole = series.current(cfg.direction * cfg.radius).norm();
        let equator = series.current((e1 + e2) * (cfg.radius / 2f64.sqrt())).norm();
        pole / equator
    });
    let rayleigh_ok = rayleigh_ratio.is_none_or(|r| {
        (r / 2f64.sqrt() - 1.0).abs() <= RAYLEIGH_TOL
            && (series.current(cfg.direction * cfg.radius).norm() / (1.5 * cfg.amplitude) - 1.0).abs()
                <= RAYLEIGH_TOL
    });

    let passed = cs_diff <= CROSS_SECTION_TOL && tail <= TAIL_TOL && rayleigh_ok;
    Ok(MieDiagnostics {
        ka: cfg.ka,
        n_terms: cfg.n_terms,
        cross_section_series: cs,
        cross_section_far_field: cf,
        cross_section_rel_diff: cs_diff,
        tail_rel_change: tail,
        rayleigh_ratio,
        passed,
    })
}

/// Runs the checks; any failure invalidates the oracle.
pub fn mie_self_check(cfg: &MieConfig) -> Result<MieDiagnostics> {
    let d = mie_diagnostics(cfg)?;
    if d.passed {
        Ok(d)
    } else {
        Err(Error::OracleInvalid(d.summary()))
    }
}
