//! Nyström approximations `A ≈ C W⁺ Cᵀ` with `C = A(:, J)`, `W = A(J, J)`.
//!
//! Five implementations are provided. They agree in exact arithmetic on a
//! well-conditioned core and differ in how `W⁺` is applied:
//!
//! | variant        | core treatment                                        |
//! |----------------|-------------------------------------------------------|
//! | `plain`        | unpivoted Cholesky, `B = C R⁻¹`                       |
//! | `stabilized`   | ε-truncated pivoted Cholesky, least-squares solve     |
//! | `shifted`      | Cholesky of `W + νI`, shift removed from the spectrum |
//! | `direct_solve` | LU solve `W X = Cᵀ`, no truncation                    |
//! | `pinv`         | explicit eigenvalue pseudoinverse of `W`              |
//!
//! Only `stabilized` comes with a stability guarantee; the others are kept
//! as baselines and are expected to fail or lose accuracy on
//! ill-conditioned cores.

mod report;
mod variants;

pub use report::{error_report, ErrorReport, SPECTRAL_EXACT_LIMIT};
pub use variants::{
    default_epsilon, eps_projector, nystrom_columns, nystrom_direct_solve, nystrom_pinv,
    nystrom_plain, nystrom_shifted, nystrom_stabilized, nystrom_stabilized_eig,
    nystrom_with_factor, run_variant, Approximation, ColumnsForm, DenseApprox, NystromFactor,
    Variant,
};
