use faer::Mat;
use num_complex::Complex64;

use crate::{Error, Result};

use super::gmres::LinearOperator;
use super::gram::GramFactor;
use super::operator::LinearOperatorSpec;

/// Largest system for which the dense eigensolve is attempted.
pub const SPECTRAL_MAX_DIM: usize = 4000;

#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<Complex64>,
    pub min_abs: f64,
    pub max_abs: f64,
    /// `max |λ| / min |λ|`.
    pub ratio: f64,
}

/// All eigenvalues of `G⁻¹ A` for the system matrix `A` of `spec`.
pub fn spectral_diagnostic(spec: &LinearOperatorSpec<'_>, gram: &GramFactor) -> Result<SpectralSummary> {
    let n = spec.dim();
    if n > SPECTRAL_MAX_DIM {
        return Err(Error::ResourceLimit(format!(
            "dense eigensolve limited to {SPECTRAL_MAX_DIM} unknowns, system has {n}"
        )));
    }
    if gram.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: gram.dim(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut dense = Mat::<Complex64>::zeros(n, n);
    let mut e = vec![zero; n];
    let mut col = vec![zero; n];
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        spec.apply(&e, &mut col);
        e[j] = zero;
        gram.solve_in_place(&mut col)?;
        for (i, v) in col.iter().enumerate() {
            dense[(i, j)] = *v;
        }
    }
    let eigenvalues = dense
        .eigenvalues()
        .map_err(|e| Error::NumericalFailure(format!("eigensolver failed: {e:?}")))?;
    let min_abs = eigenvalues.iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min);
    let max_abs = eigenvalues.iter().map(|l| l.norm()).fold(0.0, f64::max);
    Ok(SpectralSummary {
        eigenvalues,
        min_abs,
        max_abs,
        ratio: max_abs / min_abs,
    })
}
