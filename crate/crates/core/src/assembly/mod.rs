//! Galerkin matrices and right-hand sides.
//!
//! - `T_ij = ∬ G^k t_i·t_j − k⁻² ∬ G^k div t_i div t_j` (electric operator)
//! - `K_ij = ½ G_ij − ∬ t_i · [n_a × (∇ₓG^k × t_j)]` (magnetic operator, `I/2 − K`)
//! - `R_ij = −∬ G⁰ (n × t_i)·(n × t_j)` (static regulariser)
//! - `G_ij = ∫ t_i · t_j` (sparse Gram matrix)

pub mod dump;
mod engine;
mod excitation;
mod gram;

use num_complex::Complex64;

use crate::basis::RwgBasis;
use crate::linalg::{DenseMatrix, SparseMatrix};
use crate::quadrature::PairQuadrature;
use crate::solve::Formulation;
use crate::{Error, Result};

pub use excitation::{assemble_excitation, Excitation};
pub use gram::{assemble_g, assemble_g_with_degree};

/// Which dense operators to build in one pass over the panel pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MatrixSet {
    pub efio: bool,
    pub mfio: bool,
    pub regulariser: bool,
}

impl MatrixSet {
    pub const ALL: MatrixSet = MatrixSet {
        efio: true,
        mfio: true,
        regulariser: true,
    };

    /// Operators needed by `formulation`.
    pub fn for_formulation(formulation: Formulation) -> Self {
        match formulation {
            Formulation::RegCfie => Self::ALL,
            Formulation::Cfie => Self {
                efio: true,
                mfio: true,
                regulariser: false,
            },
            Formulation::Efie => Self {
                efio: true,
                ..Self::default()
            },
            Formulation::Mfie => Self {
                mfio: true,
                ..Self::default()
            },
        }
    }
}

/// Assembled operators of one mesh at one wavenumber.
#[derive(Debug, Clone)]
pub struct SystemMatrices {
    pub wavenumber: f64,
    pub efio: Option<DenseMatrix<Complex64>>,
    /// Includes the identity part `½ G`.
    pub mfio: Option<DenseMatrix<Complex64>>,
    pub regulariser: Option<DenseMatrix<f64>>,
    pub gram: SparseMatrix,
}

impl SystemMatrices {
    pub fn dim(&self) -> usize {
        self.gram.dim()
    }

    /// Size in bytes of the dense blocks.
    pub fn dense_bytes(&self) -> usize {
        let n = self.dim();
        let c = std::mem::size_of::<Complex64>() * n * n;
        self.efio.as_ref().map_or(0, |_| c)
            + self.mfio.as_ref().map_or(0, |_| c)
            + self.regulariser.as_ref().map_or(0, |_| c / 2)
    }
}

fn check_wavenumber(k: f64) -> Result<()> {
    if k > 0.0 && k.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("wavenumber must be positive, got {k}")))
    }
}

fn add_half_gram(k: &mut DenseMatrix<Complex64>, gram: &SparseMatrix) {
    for (i, j, v) in gram.triplets() {
        let e = k.get(i, j) + 0.5 * v;
        k.set(i, j, e);
    }
}

pub fn assemble_t(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    wavenumber: f64,
) -> Result<DenseMatrix<Complex64>> {
    check_wavenumber(wavenumber)?;
    let set = MatrixSet {
        efio: true,
        ..MatrixSet::default()
    };
    Ok(engine::assemble_dense(quad, basis, wavenumber, set)?.t.unwrap())
}

/// Magnetic operator including `½ G`.
pub fn assemble_k(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    wavenumber: f64,
) -> Result<DenseMatrix<Complex64>> {
    check_wavenumber(wavenumber)?;
    let set = MatrixSet {
        mfio: true,
        ..MatrixSet::default()
    };
    let mut k = engine::assemble_dense(quad, basis, wavenumber, set)?.k.unwrap();
    add_half_gram(&mut k, &assemble_g(quad.mesh(), basis));
    Ok(k)
}

/// Static regulariser; independent of the wavenumber.
pub fn assemble_r(quad: &PairQuadrature<'_>, basis: &RwgBasis) -> Result<DenseMatrix<f64>> {
    let set = MatrixSet {
        regulariser: true,
        ..MatrixSet::default()
    };
    Ok(engine::assemble_dense(quad, basis, 1.0, set)?.r.unwrap())
}

pub fn assemble_system(
    quad: &PairQuadrature<'_>,
    basis: &RwgBasis,
    wavenumber: f64,
    set: MatrixSet,
) -> Result<SystemMatrices> {
    check_wavenumber(wavenumber)?;
    let gram = assemble_g(quad.mesh(), basis);
    let ops = engine::assemble_dense(quad, basis, wavenumber, set)?;
    let mut mfio = ops.k;
    if let Some(k) = mfio.as_mut() {
        add_half_gram(k, &gram);
    }
    Ok(SystemMatrices {
        wavenumber,
        efio: ops.t,
        mfio,
        regulariser: ops.r,
        gram,
    })
}
