use faer::prelude::Solve;
use faer::sparse::linalg::solvers::Llt;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use num_complex::Complex64;

use crate::linalg::SparseMatrix;
use crate::{Error, Result};

/// Sparse Cholesky factor of the Gram matrix, reused for every `G⁻¹` application.
pub struct GramFactor {
    n: usize,
    llt: Llt<usize, f64>,
}

impl std::fmt::Debug for GramFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GramFactor").field("n", &self.n).finish_non_exhaustive()
    }
}

pub fn gram_factorise(g: &SparseMatrix) -> Result<GramFactor> {
    GramFactor::new(g)
}

impl GramFactor {
    pub fn new(g: &SparseMatrix) -> Result<Self> {
        let n = g.dim();
        let lower: Vec<_> = g
            .triplets()
            .filter(|&(i, j, _)| i >= j)
            .map(|(i, j, v)| Triplet::new(i, j, v))
            .collect();
        let csc = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &lower)
            .map_err(|e| Error::Factorisation(format!("{e:?}")))?;
        let llt = csc
            .sp_cholesky(Side::Lower)
            .map_err(|e| Error::Factorisation(format!("Gram matrix is not positive definite ({e:?})")))?;
        Ok(Self { n, llt })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve_real(&self, v: &[f64]) -> Result<Vec<f64>> {
        self.check(v.len())?;
        let mut rhs = Mat::from_fn(self.n, 1, |i, _| v[i]);
        self.llt.solve_in_place(rhs.as_mut());
        Ok((0..self.n).map(|i| rhs[(i, 0)]).collect())
    }

    /// Overwrites `v` with `G⁻¹ v`; real and imaginary parts are solved together.
    pub fn solve_in_place(&self, v: &mut [Complex64]) -> Result<()> {
        self.check(v.len())?;
        let mut rhs = Mat::from_fn(self.n, 2, |i, j| if j == 0 { v[i].re } else { v[i].im });
        self.llt.solve_in_place(rhs.as_mut());
        for (i, vi) in v.iter_mut().enumerate() {
            *vi = Complex64::new(rhs[(i, 0)], rhs[(i, 1)]);
        }
        Ok(())
    }

    fn check(&self, len: usize) -> Result<()> {
        if len == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.n,
                got: len,
            })
        }
    }
}
