//! Benchmark harness for Nyström approximations: rank sweeps over
//! selectors and implementations, CSV output, the `diag(1, γ², 0)`
//! demonstration, stability diagnostics and optional data set downloads.

pub mod config;
pub mod demo;
pub mod error;
pub mod fetch;
pub mod matrix;
pub mod record;
pub mod sweep;

pub use config::{ExperimentConfig, MatrixSource, Precision, Selector};
pub use error::{BenchError, Result};
pub use record::{emit_csv, read_csv, write_csv, Status, SweepRecord};
pub use sweep::{run_sweep, sweep_matrix};
