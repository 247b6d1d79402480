use nalgebra::DMatrix;

use crate::dense::check_finite;
use crate::error::{Error, Result};
use crate::real::Real;

/// Thin Householder QR, `M = Q R` with `Q` `n × r`.
#[derive(Debug, Clone)]
pub struct ThinQR<T: Real = f64> {
    pub q: DMatrix<T>,
    pub r_factor: DMatrix<T>,
}

impl<T: Real> ThinQR<T> {
    /// Smallest `|R_kk|` relative to the largest; small values flag a
    /// numerically rank-deficient input.
    pub fn diag_ratio(&self) -> T {
        let k = self.r_factor.nrows().min(self.r_factor.ncols());
        let mut lo = T::max_value().unwrap_or(T::one());
        let mut hi = T::zero();
        for i in 0..k {
            let d = self.r_factor[(i, i)].abs();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if hi == T::zero() {
            T::zero()
        } else {
            lo / hi
        }
    }
}

pub fn thin_qr<T: Real>(m: &DMatrix<T>) -> Result<ThinQR<T>> {
    let (n, r) = m.shape();
    if n < r {
        return Err(Error::DimensionMismatch {
            expected: format!("rows >= cols ({r})"),
            got: format!("{n}x{r}"),
        });
    }
    check_finite(m)?;
    let qr = m.clone().qr();
    Ok(ThinQR { q: qr.q(), r_factor: qr.r() })
}
