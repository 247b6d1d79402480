use nalgebra::{DMatrix, DVector};

use crate::dense::{check_finite, SymMatrix};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::rng::Stream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Frobenius,
    Spectral,
    Max,
}

/// Norm of a symmetric (or symmetric-up-to-roundoff) matrix. The spectral
/// norm is exact, taken from a full symmetric eigendecomposition.
pub fn matrix_norm<T: Real>(m: &DMatrix<T>, kind: NormKind) -> f64 {
    match kind {
        NormKind::Frobenius => m.iter().map(|x| x.as_f64() * x.as_f64()).sum::<f64>().sqrt(),
        NormKind::Max => m.iter().fold(0.0, |acc, x| acc.max(x.as_f64().abs())),
        NormKind::Spectral => {
            if m.is_empty() {
                return 0.0;
            }
            let sym = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
                0.5 * (m[(i, j)].as_f64() + m[(j, i)].as_f64())
            });
            sym.symmetric_eigenvalues().iter().fold(0.0, |acc, v| acc.max(v.abs()))
        }
    }
}

/// `‖A − Â‖ / ‖A‖` in the chosen norm, with `0/0 = 0`.
pub fn rel_err<T: Real>(a: &SymMatrix<T>, ahat: &SymMatrix<T>, kind: NormKind) -> Result<f64> {
    if a.n() != ahat.n() {
        return Err(Error::shape_mismatch((a.n(), a.n()), (ahat.n(), ahat.n())));
    }
    let num = matrix_norm(&(a.as_matrix() - ahat.as_matrix()), kind);
    let den = matrix_norm(a.as_matrix(), kind);
    Ok(if num == 0.0 { 0.0 } else { num / den })
}

/// Power iteration estimate of `‖A‖₂`.
///
/// Returns `‖A v‖` for the final unit iterate `v`, which never exceeds
/// `‖A‖₂`. Deterministic given `seed`.
pub fn spectral_norm_est<T: Real>(a: &SymMatrix<T>, iters: usize, seed: u64) -> Result<f64> {
    check_finite(a.as_matrix())?;
    spectral_norm_est_dense(a.as_matrix(), iters, seed)
}

/// [`spectral_norm_est`] for any square matrix that is symmetric up to
/// roundoff, e.g. an approximation residual. Computed in `f64`.
pub fn spectral_norm_est_dense<T: Real>(a: &DMatrix<T>, iters: usize, seed: u64) -> Result<f64> {
    if iters == 0 {
        return Err(Error::ParamOutOfRange("power iteration needs at least one step".into()));
    }
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::shape_mismatch((n, n), a.shape()));
    }
    let a64: DMatrix<f64> = a.map(|x| x.as_f64());
    let mut stream = Stream::new(seed, 0);
    let mut v = DVector::from_fn(n, |_, _| stream.normal());
    let nv = v.norm();
    if nv == 0.0 {
        return Ok(0.0);
    }
    v /= nv;
    let mut est = 0.0;
    let mut w = DVector::zeros(n);
    for _ in 0..iters {
        w.gemv(1.0, &a64, &v, 0.0);
        let nw = w.norm();
        if nw == 0.0 || !nw.is_finite() {
            return Ok(if nw.is_finite() { 0.0 } else { nw });
        }
        est = nw;
        v.copy_from(&w);
        v /= nw;
    }
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_norms() {
        let a = SymMatrix::from_diagonal(&[3.0, 2.0, 1.0]).unwrap();
        let a2 = SymMatrix::from_diagonal(&[3.0, 2.0, 0.0]).unwrap();
        assert_eq!(rel_err(&a, &a, NormKind::Frobenius).unwrap(), 0.0);
        let s = rel_err(&a, &a2, NormKind::Spectral).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        let f = rel_err(&a, &a2, NormKind::Frobenius).unwrap();
        assert!((f - 1.0 / 14f64.sqrt()).abs() < 1e-15);
        let m = rel_err(&a, &a2, NormKind::Max).unwrap();
        assert!((m - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_over_zero_is_zero() {
        let z = SymMatrix::<f64>::zeros(3);
        assert_eq!(rel_err(&z, &z, NormKind::Spectral).unwrap(), 0.0);
        assert!(rel_err(&z, &SymMatrix::zeros(2), NormKind::Max).is_err());
    }

    #[test]
    fn power_iteration_dominant_eigenvalue() {
        let a = SymMatrix::from_diagonal(&[3.0, 2.0, 1.0]).unwrap();
        let est = spectral_norm_est(&a, 50, 0).unwrap();
        assert!((est - 3.0).abs() < 1e-6 && est <= 3.0 + 1e-12);
        assert_eq!(spectral_norm_est(&SymMatrix::<f64>::zeros(4), 50, 0).unwrap(), 0.0);
        assert!(spectral_norm_est(&a, 0, 0).is_err());
    }
}
