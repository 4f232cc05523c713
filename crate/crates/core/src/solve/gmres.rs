use std::time::Instant;

use num_complex::Complex64;

use crate::linalg::{cdot, cnorm};
use crate::{Error, Result};

use super::SolveReport;

/// Square complex operator applied by GMRES.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]);
}

/// Wraps a closure `f(x, y)` computing `y = A x`.
pub struct FnOperator<F> {
    pub dim: usize,
    pub f: F,
}

impl<F: Fn(&[Complex64], &mut [Complex64]) + Sync> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        (self.f)(x, y)
    }
}

/// Loss of orthogonality above which the Gram-Schmidt pass is repeated.
const REORTH_THRESHOLD: f64 = 1e-8;

/// Rotation `[c s; −s̄ c]` with real `c`, chosen so that it annihilates `b` in `(a, b)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0), a);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb, Complex64::new(nb, 0.0));
    }
    let r = na.hypot(nb);
    let phase = a / na;
    let c = na / r;
    let s = phase * b.conj() / r;
    (c, s, phase * r)
}

#[inline]
fn rotate(c: f64, s: Complex64, x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    (x * c + s * y, -s.conj() * x + y * c)
}

/// Unrestarted GMRES from a zero initial guess.
///
/// Stops when the relative residual `‖b − A x‖ / ‖b‖` reaches `tol` or after
/// `max_iter` Arnoldi steps. On a happy breakdown the Krylov space contains the
/// exact solution and the run counts as converged.
pub fn gmres(
    op: &impl LinearOperator,
    b: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    let start = Instant::now();
    let n = op.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidArgument(format!(
            "gmres needs tol > 0 and max_iter >= 1, got tol={tol}, max_iter={max_iter}"
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let bnorm = cnorm(b);
    let mut report = SolveReport {
        x: vec![zero; n],
        iterations: 0,
        residual_history: Vec::new(),
        converged: true,
        wall_time: 0.0,
        formulation: None,
        wavenumber: None,
        n_unknowns: n,
    };
    if bnorm == 0.0 {
        report.wall_time = start.elapsed().as_secs_f64();
        return Ok(report);
    }

    let mut basis: Vec<Vec<Complex64>> = vec![b.iter().map(|v| v / bnorm).collect()];
    // columns of the rotated Hessenberg matrix, upper triangular part only
    let mut hcols: Vec<Vec<Complex64>> = Vec::new();
    let mut rotations: Vec<(f64, Complex64)> = Vec::new();
    let mut g = vec![Complex64::new(bnorm, 0.0)];
    let mut converged = false;
    let mut w = vec![zero; n];

    for j in 0..max_iter.min(n.max(1)) {
        op.apply(&basis[j], &mut w);
        let wnorm0 = cnorm(&w);
        let mut h = vec![zero; j + 2];
        for (i, q) in basis.iter().enumerate() {
            let hij = cdot(q, &w);
            h[i] = hij;
            w.iter_mut().zip(q).for_each(|(wk, qk)| *wk -= hij * qk);
        }
        let mut wnorm = cnorm(&w);
        let loss = if wnorm > 0.0 {
            basis.iter().map(|q| cdot(q, &w).norm()).fold(0.0, f64::max) / wnorm
        } else {
            0.0
        };
        if loss > REORTH_THRESHOLD {
            for (i, q) in basis.iter().enumerate() {
                let d = cdot(q, &w);
                h[i] += d;
                w.iter_mut().zip(q).for_each(|(wk, qk)| *wk -= d * qk);
            }
            wnorm = cnorm(&w);
        }
        h[j + 1] = Complex64::new(wnorm, 0.0);

        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (a, bb) = rotate(c, s, h[i], h[i + 1]);
            h[i] = a;
            h[i + 1] = bb;
        }
        let (c, s, r) = givens(h[j], h[j + 1]);
        h[j] = r;
        h.truncate(j + 1);
        let (gj, gj1) = rotate(c, s, g[j], zero);
        g[j] = gj;
        g.push(gj1);
        rotations.push((c, s));
        hcols.push(h);

        let rel = gj1.norm() / bnorm;
        report.residual_history.push(rel);
        report.iterations = j + 1;

        let breakdown = wnorm <= 1e-14 * wnorm0.max(f64::MIN_POSITIVE);
        if rel <= tol || breakdown {
            converged = rel <= tol || breakdown;
            break;
        }
        basis.push(w.iter().map(|v| v / wnorm).collect());
    }

    // back substitution on the triangular factor
    let m = hcols.len();
    let mut y = vec![zero; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for (k, yk) in y.iter().enumerate().skip(i + 1) {
            acc -= hcols[k][i] * yk;
        }
        y[i] = acc / hcols[i][i];
    }
    for (yk, q) in y.iter().zip(&basis) {
        report.x.iter_mut().zip(q).for_each(|(xi, qi)| *xi += yk * qi);
    }
    report.converged = converged;
    report.wall_time = start.elapsed().as_secs_f64();
    if report.x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("GMRES produced a non-finite iterate".into()));
    }
    Ok(report)
}
