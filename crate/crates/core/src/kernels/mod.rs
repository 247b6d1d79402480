//! Data sets, RBF kernel matrices and synthetic SPSD test matrices.

mod dataset;
mod libsvm;
mod rbf;
mod synth;

pub use dataset::{standardize, subsample, Dataset, Standardized};
pub use libsvm::{parse_libsvm, serialize_libsvm};
pub use rbf::{rbf_kernel, KernelSpec};
pub use synth::{gen_diag_counterexample, gen_gaussian_blobs, gen_snn, gen_spsd_spectrum, SNN_DIM};
