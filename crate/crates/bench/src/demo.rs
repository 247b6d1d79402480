use std::fmt;

use nystrom_core::colselect::{IndexSet, Provenance};
use nystrom_core::dense::{matrix_norm, NormKind};
use nystrom_core::kernels::gen_diag_counterexample;
use nystrom_core::nalgebra::DMatrix;
use nystrom_core::nystrom::{default_epsilon, nystrom_stabilized, nystrom_with_factor};
use nystrom_core::Error;

use crate::error::Result;

/// Outcome of the `diag(1, γ², 0)` demonstration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemoReport {
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    /// `‖A − B̂B̂ᵀ‖₂` with the perturbed factor `R̂ = diag(1, δγ)`.
    pub naive_error: f64,
    /// `γ² (1/δ² − 1)`.
    pub analytic_error: f64,
    pub stabilized_error: f64,
    pub stabilized_rank: usize,
}

impl DemoReport {
    /// Naive error within a factor 1.5 of the analytic value.
    pub fn naive_matches(&self) -> bool {
        let ratio = self.naive_error / self.analytic_error;
        (1.0 / 1.5..=1.5).contains(&ratio)
    }

    /// Stabilized error at most `max(γ², 10ε)`.
    pub fn stabilized_bounded(&self) -> bool {
        self.stabilized_error <= (self.gamma * self.gamma).max(10.0 * self.epsilon)
    }

    pub fn passed(&self) -> bool {
        self.naive_matches() && self.stabilized_bounded()
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
        writeln!(f, "A = diag(1, gamma^2, 0), J = (0, 1), gamma = {:e}, delta = {:e}", self.gamma, self.delta)?;
        writeln!(f, "naive (R = diag(1, delta*gamma)):  error {:e}", self.naive_error)?;
        writeln!(f, "analytic gamma^2 (1/delta^2 - 1):  error {:e}", self.analytic_error)?;
        writeln!(f, "stabilized (eps = {:e}, r_hat = {}): error {:e}", self.epsilon, self.stabilized_rank, self.stabilized_error)?;
        writeln!(f, "naive within 1.5x of analytic: {}", mark(self.naive_matches()))?;
        write!(f, "stabilized <= max(gamma^2, 10 eps): {}", mark(self.stabilized_bounded()))
    }
}

/// Run the naive path with the injected factor `diag(1, γ + γ̃)`,
/// `γ̃ = −(1 − δ)γ`, and the stabilized path with `ε = 10u‖A‖₂`, both on
/// `J = (0, 1)`.
pub fn demo_counterexample(gamma: f64, delta: f64) -> Result<DemoReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::ParamOutOfRange(format!("gamma must lie in (0, 1), got {gamma}")).into());
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::ParamOutOfRange(format!("delta must lie in (0, 0.5), got {delta}")).into());
    }
    let a = gen_diag_counterexample(gamma)?;
    let j = IndexSet::new(vec![0, 1], 3, Provenance::Greedy)?;

    let perturbed = gamma + (-(1.0 - delta) * gamma);
    let r_hat = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, perturbed]);
    let naive = nystrom_with_factor(&a, &j, &r_hat)?;
    let naive_error = matrix_norm(&(a.as_matrix() - naive.dense()), NormKind::Spectral);

    let epsilon = default_epsilon(&a)?;
    let stable = nystrom_stabilized(&a, &j, epsilon)?;
    let stabilized_error = matrix_norm(&(a.as_matrix() - stable.dense()), NormKind::Spectral);

    Ok(DemoReport {
        gamma,
        delta,
        epsilon,
        naive_error,
        analytic_error: gamma * gamma * (1.0 / (delta * delta) - 1.0),
        stabilized_error,
        stabilized_rank: stable.r_hat,
    })
}
