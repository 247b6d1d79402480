use nalgebra::DMatrix;

use crate::dense::TruncCholFactor;
use crate::error::{Error, Result};
use crate::real::Real;

/// `B = C′ R_ε†` where `C′ = C(:, perm)`: row-wise least-squares /
/// minimum-norm solution of `B R_ε ≈ C′`.
///
/// With the Householder QR `R_εᵀ = Q T` (`Q` `r × r̂`, `T` upper triangular),
/// `R_ε† = Q T⁻ᵀ`, so `B` is obtained as `(C′Q) T⁻ᵀ` by one triangular
/// solve. Neither an explicit inverse nor the normal equations are formed.
pub fn lsq_min_norm<T: Real>(c: &DMatrix<T>, factor: &TruncCholFactor<T>) -> Result<DMatrix<T>> {
    let (n, r) = c.shape();
    if r != factor.r {
        return Err(Error::shape_mismatch((n, factor.r), (n, r)));
    }
    let r_hat = factor.r_hat;
    if r_hat == 0 {
        return Ok(DMatrix::zeros(n, 0));
    }
    let permuted = DMatrix::from_fn(n, r, |i, k| c[(i, factor.perm[k])]);
    let qr = factor.rows.transpose().qr();
    let q = qr.q();
    let t = qr.r();
    let m = permuted * q;
    // B Tᵀ = M  <=>  T Bᵀ = Mᵀ
    let bt = t.solve_upper_triangular(&m.transpose()).ok_or(Error::SolverSingular)?;
    Ok(bt.transpose())
}
