use nalgebra::DMatrix;

use crate::dense::SymMatrix;
use crate::error::{Error, Result};
use crate::kernels::Dataset;

/// Gaussian kernel `exp(−‖x − y‖² / (2σ²))` with bandwidth `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    bandwidth: f64,
}

impl KernelSpec {
    pub fn rbf(bandwidth: f64) -> Result<Self> {
        if bandwidth > 0.0 && bandwidth.is_finite() {
            Ok(Self { bandwidth })
        } else {
            Err(Error::ParamOutOfRange(format!("bandwidth must be positive, got {bandwidth}")))
        }
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }
}

/// Kernel matrix of `ds`. Squared distances are summed from coordinate
/// differences (never from `‖x‖² − 2xᵀy + ‖y‖²`), each unordered pair is
/// evaluated once, and the diagonal is exactly one.
pub fn rbf_kernel(ds: &Dataset, spec: KernelSpec) -> Result<SymMatrix<f64>> {
    let n = ds.n();
    let x = ds.points().transpose();
    let scale = -1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
    let mut k = DMatrix::from_element(n, n, 1.0);
    for j in 0..n {
        let xj = x.column(j);
        for i in 0..j {
            let dist2: f64 = x.column(i).iter().zip(xj.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
            let v = (dist2 * scale).exp();
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    Ok(SymMatrix::new(k)?.with_psd_hint(true))
}
