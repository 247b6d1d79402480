//! Stabilized Nyström approximation of symmetric positive semidefinite
//! matrices.
//!
//! The approximation `A ≈ B Bᵀ` is built from a subset `J` of the columns
//! of `A`. The stabilized variant truncates the core matrix `A(J, J)` with
//! a diagonally pivoted Cholesky factorization that stops at a threshold
//! `ε`, then solves for `B` with a backward stable least-squares solve. The
//! crate also provides the usual competitor implementations, column
//! selectors with a local maximum-volume certificate, and the kernel and
//! synthetic matrices used to compare them.

mod error;
mod real;

pub mod colselect;
pub mod dense;
pub mod kernels;
pub mod nystrom;
pub mod rng;

pub use error::{Error, Result};
pub use nalgebra;
pub use real::Real;
