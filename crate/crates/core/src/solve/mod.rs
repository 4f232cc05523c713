//! Formulation operators and the GMRES driver.

mod gmres;
mod gram;
mod operator;
mod spectral;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;

use crate::assembly::{assemble_excitation, assemble_system, Excitation, MatrixSet, SystemMatrices};
use crate::basis::RwgBasis;
use crate::config::QuadConfig;
use crate::geometry::SurfaceMesh;
use crate::linalg::cnorm;
use crate::quadrature::PairQuadrature;
use crate::{Error, Result};

pub use gmres::{gmres, FnOperator, LinearOperator};
pub use gram::{gram_factorise, GramFactor};
pub use operator::{apply_operator, LinearOperatorSpec, CFIE_SIGN};
pub use spectral::{spectral_diagnostic, SpectralSummary, SPECTRAL_MAX_DIM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formulation {
    /// Magnetic equation plus the electric one premultiplied by the static
    /// single layer through the inverse Gram matrix.
    RegCfie,
    /// Classical combined field equation.
    Cfie,
    Efie,
    Mfie,
}

impl Formulation {
    pub const ALL: [Formulation; 4] = [Self::RegCfie, Self::Cfie, Self::Efie, Self::Mfie];

    pub fn name(self) -> &'static str {
        match self {
            Self::RegCfie => "regcfie",
            Self::Cfie => "cfie",
            Self::Efie => "efie",
            Self::Mfie => "mfie",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown method '{s}', expected one of regcfie, cfie, efie, mfie"
                ))
            })
    }
}

/// Outcome of one iterative solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub x: Vec<Complex64>,
    /// Arnoldi steps performed.
    pub iterations: usize,
    /// Relative residual after each step.
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// Seconds, including assembly when produced by [`solve_formulation`].
    pub wall_time: f64,
    pub formulation: Option<Formulation>,
    pub wavenumber: Option<f64>,
    pub n_unknowns: usize,
}

impl SolveReport {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Coupling used by `cfie` when the excitation does not carry one.
    pub alpha: f64,
    pub quad: QuadConfig,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            tol: 1e-5,
            max_iter: 500,
            alpha: 0.5,
            quad: QuadConfig::default(),
        }
    }
}

/// Assembles what `formulation` needs, builds the right-hand side and runs GMRES.
pub fn solve_formulation(
    mesh: &SurfaceMesh,
    basis: &RwgBasis,
    exc: &Excitation,
    formulation: Formulation,
    config: &SolveConfig,
) -> Result<SolveReport> {
    let start = Instant::now();
    let quad = PairQuadrature::new(mesh, config.quad)?;
    let matrices = assemble_system(&quad, basis, exc.wavenumber, MatrixSet::for_formulation(formulation))?;
    let mut report = solve_assembled(&quad, basis, &matrices, exc, formulation, config)?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Like [`solve_formulation`] with the matrices already assembled.
pub fn solve_assembled(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    matrices: &SystemMatrices,
    exc: &Excitation,
    formulation: Formulation,
    config: &SolveConfig,
) -> Result<SolveReport> {
    let start = Instant::now();
    if (matrices.wavenumber - exc.wavenumber).abs() > 1e-14 * exc.wavenumber {
        return Err(Error::InvalidArgument(format!(
            "matrices were built for k = {}, excitation has k = {}",
            matrices.wavenumber, exc.wavenumber
        )));
    }
    let alpha = exc.alpha.unwrap_or(config.alpha);
    let exc = exc.with_alpha(alpha);
    let spec = LinearOperatorSpec::new(formulation, matrices, alpha)?;
    let mut b = assemble_excitation(quad, basis, &exc, formulation)?;
    if formulation == Formulation::Efie {
        let scale = Complex64::new(0.0, exc.wavenumber).inv();
        b.iter_mut().for_each(|v| *v *= scale);
    }
    let mut report = gmres(&spec, &b, config.tol, config.max_iter)?;
    report.formulation = Some(formulation);
    report.wavenumber = Some(exc.wavenumber);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok(report)
}

/// `‖b − A x‖ / ‖b‖` computed from scratch.
pub fn true_residual(op: &impl LinearOperator, b: &[Complex64], x: &[Complex64]) -> f64 {
    let mut ax = vec![Complex64::new(0.0, 0.0); b.len()];
    op.apply(x, &mut ax);
    let r: Vec<Complex64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    cnorm(&r) / cnorm(b)
}
