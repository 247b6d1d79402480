//! Column index selection for Nyström approximations.
//!
//! Index sets are zero-based throughout. Selectors: greedy diagonal
//! pivoting, column-pivoted QR, uniform sampling, and local maximum-volume
//! refinement by single-index swaps, plus the exhaustive swap check used to
//! certify a set and the stability diagnostics of a chosen set.

mod diagnostics;
mod index_set;
mod maxvol;
mod select;

pub use diagnostics::{diagnostics, sigma_min_sq, StabilityDiagnostics};
pub use index_set::{IndexSet, Provenance};
pub use maxvol::{
    log_det_principal, maxvol_refine, maxvol_refine_with_history, verify_local_maxvol, MaxvolCheck,
    Refinement, Swap, DEFAULT_DELTA,
};
pub use select::{greedy_order, greedy_pivot_select, qrcp_order, qrcp_select, refined_select, uniform_select};
