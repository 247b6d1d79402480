use nalgebra::DMatrix;

use crate::dense::{spectral_norm_est_dense, Spectrum, SymMatrix};
use crate::error::{Error, Result};
use crate::nystrom::Approximation;
use crate::real::Real;

/// Up to this dimension spectral norms are exact (full eigenvalue
/// computation); above it they come from 50 steps of power iteration.
pub const SPECTRAL_EXACT_LIMIT: usize = 512;

/// Errors of an approximation `Â` of `A`, computed in double precision.
///
/// Non-finite approximations yield non-finite error fields rather than an
/// error, so that unstable runs can still be recorded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub rel_frob: f64,
    pub rel_spectral: f64,
    pub rel_max: f64,
    /// `‖A − Â‖₂`.
    pub abs_spectral: f64,
    /// `‖A − ⟦A⟧_r̂‖_F / ‖A‖_F`.
    pub tsvd_rel_frob: f64,
    /// `rel_frob / tsvd_rel_frob`; `1` when both vanish, `+inf` when only
    /// the baseline does.
    pub ratio_to_tsvd: f64,
    /// `n² r (r+1) σ_{r+1}(A) + 2 n r ε` with `r = |J|`, an upper bound on
    /// `abs_spectral` for the stabilized variant on a locally max-vol `J`.
    /// Only filled when a spectrum is supplied.
    pub theorem_bound: Option<f64>,
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if m.iter().any(|x| !x.is_finite()) {
        return f64::INFINITY;
    }
    if n <= SPECTRAL_EXACT_LIMIT {
        m.clone().symmetric_eigenvalues().iter().fold(0.0, |acc, v| acc.max(v.abs()))
    } else {
        spectral_norm_est_dense(m, 50, 0).unwrap_or(f64::NAN)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Fill an [`ErrorReport`] for `approx` against `A`. Without a spectrum the
/// TSVD baseline is computed here and the theorem bound is left empty.
pub fn error_report<T: Real>(
    a: &SymMatrix<T>,
    approx: &Approximation<T>,
    spectrum: Option<&Spectrum>,
) -> Result<ErrorReport> {
    let n = a.n();
    if approx.j().n() != n {
        return Err(Error::shape_mismatch((n, n), (approx.j().n(), approx.j().n())));
    }
    let a64 = a.as_matrix().map(|x| x.as_f64());
    let dense = approx.dense();
    if dense.shape() != (n, n) {
        return Err(Error::shape_mismatch((n, n), dense.shape()));
    }
    let diff = &a64 - dense.map(|x| x.as_f64());

    let frob = |m: &DMatrix<f64>| m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let maxabs = |m: &DMatrix<f64>| m.iter().fold(0.0f64, |acc, x| if x.is_nan() { f64::NAN } else { acc.max(x.abs()) });

    let computed;
    let spec = match spectrum {
        Some(s) => s,
        None => {
            computed = Spectrum::of(a);
            &computed
        }
    };
    let abs_spectral = spectral_norm(&diff);
    let rel_frob = ratio(frob(&diff), spec.frobenius());
    let tsvd_rel_frob = spec.tsvd_rel_frob(approx.r_hat());
    let ratio_to_tsvd = if tsvd_rel_frob > 0.0 {
        rel_frob / tsvd_rel_frob
    } else if rel_frob == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let theorem_bound = spectrum.map(|s| {
        let (nf, r) = (n as f64, approx.j().len() as f64);
        let eps = approx.parameter().as_f64();
        nf * nf * r * (r + 1.0) * s.sigma(approx.j().len() + 1) + 2.0 * nf * r * eps
    });
    Ok(ErrorReport {
        rel_frob,
        rel_spectral: ratio(abs_spectral, spec.norm2()),
        rel_max: ratio(maxabs(&diff), maxabs(&a64)),
        abs_spectral,
        tsvd_rel_frob,
        ratio_to_tsvd,
        theorem_bound,
    })
}
