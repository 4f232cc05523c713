use num_complex::Complex64;

use crate::assembly::SystemMatrices;
use crate::{Error, Result};

use super::gmres::LinearOperator;
use super::gram::GramFactor;
use super::Formulation;

/// Sign of the electric block in the classical combined field equation,
/// fixed so that its electric part agrees with the electric field equation.
pub const CFIE_SIGN: f64 = -1.0;

/// Discrete system operator of one formulation.
///
/// - `regcfie`: `K v + i k² R G⁻¹ T v`
/// - `cfie`: `K v − i k α T v`
/// - `efie`: `T v`
/// - `mfie`: `K v`
#[derive(Debug)]
pub struct LinearOperatorSpec<'a> {
    formulation: Formulation,
    matrices: &'a SystemMatrices,
    gram: Option<GramFactor>,
    alpha: f64,
    wavenumber: f64,
}

fn missing(what: &str, f: Formulation) -> Error {
    Error::InvalidArgument(format!("{f} needs the {what} matrix"))
}

impl<'a> LinearOperatorSpec<'a> {
    /// Checks that `matrices` holds what `formulation` needs and factorises
    /// the Gram matrix for `regcfie`. `alpha` is only read by `cfie`.
    pub fn new(formulation: Formulation, matrices: &'a SystemMatrices, alpha: f64) -> Result<Self> {
        let n = matrices.dim();
        let needs_t = formulation != Formulation::Mfie;
        let needs_k = formulation != Formulation::Efie;
        let needs_r = formulation == Formulation::RegCfie;
        let check = |rows: Option<usize>, what: &str| -> Result<()> {
            match rows {
                None => Err(missing(what, formulation)),
                Some(r) if r != n => Err(Error::DimensionMismatch { expected: n, got: r }),
                Some(_) => Ok(()),
            }
        };
        if needs_t {
            check(matrices.efio.as_ref().map(|m| m.rows()), "electric")?;
        }
        if needs_k {
            check(matrices.mfio.as_ref().map(|m| m.rows()), "magnetic")?;
        }
        if needs_r {
            check(matrices.regulariser.as_ref().map(|m| m.rows()), "regulariser")?;
        }
        if formulation == Formulation::Cfie && !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("invalid coupling alpha = {alpha}")));
        }
        let gram = if needs_r {
            Some(GramFactor::new(&matrices.gram)?)
        } else {
            None
        };
        Ok(Self {
            formulation,
            matrices,
            gram,
            alpha,
            wavenumber: matrices.wavenumber,
        })
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn gram(&self) -> Option<&GramFactor> {
        self.gram.as_ref()
    }

    fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        let m = self.matrices;
        let k = self.wavenumber;
        let zero = Complex64::new(0.0, 0.0);
        match self.formulation {
            Formulation::Efie => m.efio.as_ref().unwrap().matvec(v, out),
            Formulation::Mfie => m.mfio.as_ref().unwrap().matvec(v, out),
            Formulation::Cfie => {
                m.mfio.as_ref().unwrap().matvec(v, out);
                let mut tv = vec![zero; v.len()];
                m.efio.as_ref().unwrap().matvec(v, &mut tv);
                let c = Complex64::new(0.0, k * self.alpha * CFIE_SIGN);
                out.iter_mut().zip(&tv).for_each(|(o, t)| *o += c * t);
            }
            Formulation::RegCfie => {
                m.mfio.as_ref().unwrap().matvec(v, out);
                let mut tv = vec![zero; v.len()];
                m.efio.as_ref().unwrap().matvec(v, &mut tv);
                self.gram
                    .as_ref()
                    .unwrap()
                    .solve_in_place(&mut tv)
                    .expect("dimension checked at construction");
                let mut rtv = vec![zero; v.len()];
                m.regulariser.as_ref().unwrap().matvec(&tv, &mut rtv);
                let c = Complex64::new(0.0, k * k);
                out.iter_mut().zip(&rtv).for_each(|(o, r)| *o += c * r);
            }
        }
    }
}

impl LinearOperator for LinearOperatorSpec<'_> {
    fn dim(&self) -> usize {
        self.matrices.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        self.apply_into(x, y)
    }
}

pub fn apply_operator(spec: &LinearOperatorSpec<'_>, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = spec.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    spec.apply_into(v, &mut out);
    Ok(out)
}
