//! Dense building blocks: symmetric matrices, truncated pivoted Cholesky,
//! symmetric eigendecompositions, thin QR, the minimum-norm solve against a
//! truncated factor, and the norms used for error reporting.
//!
//! Matrices are held densely and in memory. Eigendecompositions and
//! Householder QR are delegated to `nalgebra`; the truncated Cholesky and
//! the triangular solve paths are implemented here because their stopping
//! rule, tie-breaking and error reporting are part of the contract.

mod chol;
mod eig;
mod lsq;
mod norms;
mod qr;
mod sym;

pub use chol::{cholesky_upper, pivoted_cholesky_trunc, TruncCholFactor};
pub(crate) use chol::{pivoted_cholesky_core, PivotStop};
pub use eig::{eig_truncate, symmetric_eigen_sorted, tsvd, EigTruncation, Spectrum, TsvdApprox};
pub use lsq::lsq_min_norm;
pub use norms::{matrix_norm, rel_err, spectral_norm_est, spectral_norm_est_dense, NormKind};
pub use qr::{thin_qr, ThinQR};
pub use sym::SymMatrix;

pub(crate) use sym::check_finite;
