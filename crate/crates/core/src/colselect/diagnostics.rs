use nalgebra::DMatrix;

use crate::colselect::{log_det_principal, IndexSet};
use crate::dense::{cholesky_upper, eig_truncate, thin_qr, SymMatrix};
use crate::error::{Error, Result};
use crate::real::Real;

/// Stability quantities of an index set `J` with `C = A(:, J)` and
/// `W = A(J, J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityDiagnostics {
    /// `σ_min(Q(J, :))` for the thin QR `C = QR`; lies in `[0, 1]`.
    pub sigma_min_sq: f64,
    /// `‖C (W)_ε†‖₂`.
    pub proj_norm: f64,
    /// `‖C (W)_ε† W − C‖₂`: the ε-projector applied to the sampled columns.
    pub eps_proj_residual: f64,
    /// `‖A − C W⁻¹ Cᵀ‖_max` (untruncated Nyström).
    pub maxnorm_err: f64,
    /// `log det W`, `-inf` when `W` is numerically singular.
    pub det_value: f64,
}

fn norm2<T: Real>(m: &DMatrix<T>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.map(|x| x.as_f64()).singular_values().max()
}

/// `σ_min(Q(J, :))` where `Q` spans the columns `A(:, J)`.
pub fn sigma_min_sq<T: Real>(a: &SymMatrix<T>, j: &IndexSet) -> Result<f64> {
    let c = a.columns(j.indices());
    let qr = thin_qr(&c)?;
    let floor = T::of(a.n() as f64) * T::unit_roundoff();
    if !(qr.diag_ratio() > floor) {
        return Err(Error::RankDeficientSample);
    }
    let rows = qr.q.select_rows(j.indices());
    Ok(rows.map(|x| x.as_f64()).singular_values().min())
}

/// Compute [`StabilityDiagnostics`] for `J` at truncation level `epsilon`.
///
/// The ε-pseudoinverse is taken from the eigendecomposition of `W`. The
/// max-norm error uses plain Cholesky of `W`; when that breaks down it
/// falls back to the eigenvalue pseudoinverse at the floor `|J| · u · ‖W‖₂`.
pub fn diagnostics<T: Real>(a: &SymMatrix<T>, j: &IndexSet, epsilon: T) -> Result<StabilityDiagnostics> {
    if j.n() != a.n() {
        return Err(Error::shape_mismatch((a.n(), a.n()), (j.n(), j.n())));
    }
    let sigma = sigma_min_sq(a, j)?;
    let c = a.columns(j.indices());
    let w = a.principal(j.indices());

    let pinv_eps = eig_truncate(&w, epsilon)?.pseudo_inverse();
    let proj = &c * pinv_eps;
    let proj_norm = norm2(&proj);
    let residual = &proj * w.as_matrix() - &c;
    let eps_proj_residual = norm2(&residual);

    let nystrom = match cholesky_upper(w.as_matrix()) {
        Ok(r) => {
            let bt = r
                .transpose()
                .solve_lower_triangular(&c.transpose())
                .ok_or(Error::SolverSingular)?;
            bt.transpose() * bt
        }
        Err(Error::CholeskyBreakdown { .. }) => {
            let top = w.max_abs();
            if top > T::zero() {
                let floor = T::of(j.len() as f64) * T::unit_roundoff() * top;
                &c * eig_truncate(&w, floor)?.pseudo_inverse() * c.transpose()
            } else {
                DMatrix::zeros(a.n(), a.n())
            }
        }
        Err(e) => return Err(e),
    };
    let maxnorm_err = (a.as_matrix() - nystrom).iter().fold(0.0f64, |m, x| m.max(x.as_f64().abs()));
    let det_value = log_det_principal(a, j.indices()).unwrap_or(f64::NEG_INFINITY);

    Ok(StabilityDiagnostics { sigma_min_sq: sigma, proj_norm, eps_proj_residual, maxnorm_err, det_value })
}
