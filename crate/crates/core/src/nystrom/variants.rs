use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::colselect::IndexSet;
use crate::dense::{
    cholesky_upper, eig_truncate, lsq_min_norm, pivoted_cholesky_trunc, spectral_norm_est,
    symmetric_eigen_sorted, thin_qr, SymMatrix, TruncCholFactor,
};
use crate::error::{Error, Result};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Plain,
    Stabilized,
    Shifted,
    DirectSolve,
    Pinv,
}

impl Variant {
    pub const ALL: [Variant; 5] =
        [Variant::Plain, Variant::Stabilized, Variant::Shifted, Variant::DirectSolve, Variant::Pinv];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Stabilized => "stabilized",
            Variant::Shifted => "shifted",
            Variant::DirectSolve => "direct_solve",
            Variant::Pinv => "pinv",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown variant {s:?}")))
    }
}

/// Tall factor `B` with `A ≈ B Bᵀ`.
#[derive(Debug, Clone)]
pub struct NystromFactor<T: Real = f64> {
    /// `n × r̂`.
    pub b: DMatrix<T>,
    pub variant: Variant,
    pub j: IndexSet,
    /// Truncation threshold ε or shift ν; zero for `plain`.
    pub epsilon_or_shift: T,
    pub r_hat: usize,
}

impl<T: Real> NystromFactor<T> {
    /// `B Bᵀ`.
    pub fn dense(&self) -> DMatrix<T> {
        &self.b * self.b.transpose()
    }
}

/// Approximation returned in assembled `n × n` form.
#[derive(Debug, Clone)]
pub struct DenseApprox<T: Real = f64> {
    pub matrix: DMatrix<T>,
    pub variant: Variant,
    pub j: IndexSet,
    /// Pseudoinverse cutoff for `pinv`; zero for `direct_solve`.
    pub parameter: T,
    /// Rank of the core inverse that was applied.
    pub r_hat: usize,
}

#[derive(Debug, Clone)]
pub enum Approximation<T: Real = f64> {
    Factor(NystromFactor<T>),
    Dense(DenseApprox<T>),
}

impl<T: Real> Approximation<T> {
    pub fn dense(&self) -> DMatrix<T> {
        match self {
            Approximation::Factor(f) => f.dense(),
            Approximation::Dense(d) => d.matrix.clone(),
        }
    }

    pub fn variant(&self) -> Variant {
        match self {
            Approximation::Factor(f) => f.variant,
            Approximation::Dense(d) => d.variant,
        }
    }

    pub fn j(&self) -> &IndexSet {
        match self {
            Approximation::Factor(f) => &f.j,
            Approximation::Dense(d) => &d.j,
        }
    }

    pub fn r_hat(&self) -> usize {
        match self {
            Approximation::Factor(f) => f.r_hat,
            Approximation::Dense(d) => d.r_hat,
        }
    }

    pub fn parameter(&self) -> T {
        match self {
            Approximation::Factor(f) => f.epsilon_or_shift,
            Approximation::Dense(d) => d.parameter,
        }
    }
}

fn check_set<T: Real>(a: &SymMatrix<T>, j: &IndexSet) -> Result<()> {
    if j.n() != a.n() {
        return Err(Error::shape_mismatch((a.n(), a.n()), (j.n(), j.n())));
    }
    Ok(())
}

fn positive<T: Real>(name: &str, x: T) -> Result<()> {
    if x > T::zero() && x.as_f64().is_finite() {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange(format!("{name} must be positive, got {x:e}")))
    }
}

fn symmetrize<T: Real>(m: DMatrix<T>) -> DMatrix<T> {
    let half = T::of(0.5);
    let mt = m.transpose();
    (m + mt) * half
}

/// `B = C R⁻¹` for an upper triangular `R`, via `Rᵀ Bᵀ = Cᵀ`.
fn right_solve_upper<T: Real>(c: &DMatrix<T>, r: &DMatrix<T>) -> Result<DMatrix<T>> {
    let bt = r.transpose().solve_lower_triangular(&c.transpose()).ok_or(Error::SolverSingular)?;
    Ok(bt.transpose())
}

/// `10 · u · ‖A‖₂` with the norm from 50 steps of power iteration.
pub fn default_epsilon<T: Real>(a: &SymMatrix<T>) -> Result<T> {
    let norm = spectral_norm_est(a, 50, 0)?;
    Ok(T::of(10.0 * T::UNIT_ROUNDOFF * norm))
}

/// Unpivoted Cholesky `W = RᵀR` and `B = C R⁻¹`. A non-positive pivot is
/// reported as `CholeskyBreakdown`.
pub fn nystrom_plain<T: Real>(a: &SymMatrix<T>, j: &IndexSet) -> Result<NystromFactor<T>> {
    check_set(a, j)?;
    let c = a.columns(j.indices());
    let r = cholesky_upper(a.principal(j.indices()).as_matrix())?;
    let b = right_solve_upper(&c, &r)?;
    Ok(NystromFactor { b, variant: Variant::Plain, j: j.clone(), epsilon_or_shift: T::zero(), r_hat: j.len() })
}

/// Nyström with an injected core factor: `B = C R̂⁻¹` for a caller-supplied
/// upper triangular `R̂ ≈ chol(W)`. Used to reproduce the effect of a
/// perturbed Cholesky factor deterministically.
pub fn nystrom_with_factor<T: Real>(a: &SymMatrix<T>, j: &IndexSet, r_hat: &DMatrix<T>) -> Result<NystromFactor<T>> {
    check_set(a, j)?;
    if r_hat.shape() != (j.len(), j.len()) {
        return Err(Error::shape_mismatch((j.len(), j.len()), r_hat.shape()));
    }
    let c = a.columns(j.indices());
    let b = right_solve_upper(&c, r_hat)?;
    Ok(NystromFactor { b, variant: Variant::Plain, j: j.clone(), epsilon_or_shift: T::zero(), r_hat: j.len() })
}

/// The factored form `A ≈ C′ R_ε† (C′ R_ε†)ᵀ` before the final solve,
/// where `C′ = C(:, perm)`.
#[derive(Debug, Clone)]
pub struct ColumnsForm<T: Real = f64> {
    pub c: DMatrix<T>,
    pub factor: TruncCholFactor<T>,
}

impl<T: Real> ColumnsForm<T> {
    pub fn solve(&self) -> Result<DMatrix<T>> {
        lsq_min_norm(&self.c, &self.factor)
    }
}

pub fn nystrom_columns<T: Real>(a: &SymMatrix<T>, j: &IndexSet, epsilon: T) -> Result<ColumnsForm<T>> {
    check_set(a, j)?;
    positive("epsilon", epsilon)?;
    let factor = pivoted_cholesky_trunc(&a.principal(j.indices()), epsilon)?;
    Ok(ColumnsForm { c: a.columns(j.indices()), factor })
}

/// Stabilized Nyström: ε-truncated pivoted Cholesky `R_ε` of `W`, then
/// `B = C R_ε†` by a backward stable least-squares solve.
///
/// Propagates `NegativePivotDominant` when `W` is far from PSD; see
/// [`nystrom_stabilized_eig`] for the eigenvalue-truncation path.
pub fn nystrom_stabilized<T: Real>(a: &SymMatrix<T>, j: &IndexSet, epsilon: T) -> Result<NystromFactor<T>> {
    let form = nystrom_columns(a, j, epsilon)?;
    let b = form.solve()?;
    Ok(NystromFactor {
        b,
        variant: Variant::Stabilized,
        j: j.clone(),
        epsilon_or_shift: epsilon,
        r_hat: form.factor.r_hat,
    })
}

/// Stabilized Nyström with `(W)_ε` from the eigendecomposition: eigenpairs
/// below ε (including all negative ones) are dropped and
/// `B = C U₁ Σ₁^{-1/2}`.
pub fn nystrom_stabilized_eig<T: Real>(a: &SymMatrix<T>, j: &IndexSet, epsilon: T) -> Result<NystromFactor<T>> {
    check_set(a, j)?;
    positive("epsilon", epsilon)?;
    let t = eig_truncate(&a.principal(j.indices()), epsilon)?;
    let mut b = a.columns(j.indices()) * &t.vectors;
    for (k, &v) in t.values.iter().enumerate() {
        b.column_mut(k).scale_mut(T::one() / v.sqrt());
    }
    Ok(NystromFactor {
        b,
        variant: Variant::Stabilized,
        j: j.clone(),
        epsilon_or_shift: epsilon,
        r_hat: t.rank(),
    })
}

/// Shifted Nyström: `C_ν = C + ν S`, Cholesky of `W_ν = C_ν(J, :)`,
/// `F = C_ν R⁻¹ = U Σ Vᵀ` (thin QR then SVD of the triangle), and
/// `B = U diag(√max(Σ² − ν, 0))`. Columns with a zero eigenvalue are
/// dropped, so `r̂` counts the positive ones.
pub fn nystrom_shifted<T: Real>(a: &SymMatrix<T>, j: &IndexSet, nu: T) -> Result<NystromFactor<T>> {
    check_set(a, j)?;
    positive("shift", nu)?;
    let mut c = a.columns(j.indices());
    for (k, &row) in j.indices().iter().enumerate() {
        c[(row, k)] += nu;
    }
    let w = symmetrize(c.select_rows(j.indices()));
    let r = cholesky_upper(&w)?;
    let f = right_solve_upper(&c, &r)?;
    let qr = thin_qr(&f)?;
    let svd = qr.r_factor.svd(true, false);
    let u_small = svd.u.ok_or(Error::SolverSingular)?;
    let u = qr.q * u_small;

    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| {
        svd.singular_values[y]
            .partial_cmp(&svd.singular_values[x])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });
    // Σ² is only known to about 2u relative accuracy; a difference below
    // that is cancellation noise and clamps to zero like a negative one.
    let noise = T::of(2.0) * T::unit_roundoff();
    let lambdas: Vec<(usize, T)> = order
        .into_iter()
        .map(|k| {
            let s2 = svd.singular_values[k] * svd.singular_values[k];
            (k, s2 - nu, s2)
        })
        .filter(|&(_, l, s2)| l > noise * s2)
        .map(|(k, l, _)| (k, l))
        .collect();
    let mut b = DMatrix::zeros(a.n(), lambdas.len());
    for (col, &(k, l)) in lambdas.iter().enumerate() {
        b.set_column(col, &(u.column(k) * l.sqrt()));
    }
    Ok(NystromFactor { b, variant: Variant::Shifted, j: j.clone(), epsilon_or_shift: nu, r_hat: lambdas.len() })
}

/// `C (W \ Cᵀ)` with an LU solve with partial pivoting, symmetrized. An
/// exactly zero pivot is reported as `SolverSingular`; near-singular cores
/// are solved without any safeguard.
pub fn nystrom_direct_solve<T: Real>(a: &SymMatrix<T>, j: &IndexSet) -> Result<DenseApprox<T>> {
    check_set(a, j)?;
    let c = a.columns(j.indices());
    let lu = a.principal(j.indices()).into_matrix().lu();
    let x = lu.solve(&c.transpose()).ok_or(Error::SolverSingular)?;
    Ok(DenseApprox {
        matrix: symmetrize(&c * x),
        variant: Variant::DirectSolve,
        j: j.clone(),
        parameter: T::zero(),
        r_hat: j.len(),
    })
}

/// `C W† Cᵀ` with `W†` formed explicitly from the eigendecomposition,
/// inverting eigenvalues with `|λ| > tol`. The default cutoff is
/// `|J| · u · max |λ|`.
pub fn nystrom_pinv<T: Real>(a: &SymMatrix<T>, j: &IndexSet, tol: Option<T>) -> Result<DenseApprox<T>> {
    check_set(a, j)?;
    let w = a.principal(j.indices());
    let (values, vectors) = symmetric_eigen_sorted(w.as_matrix());
    let top = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let tol = match tol {
        Some(t) if t >= T::zero() => t,
        Some(t) => return Err(Error::ParamOutOfRange(format!("tolerance must be nonnegative, got {t:e}"))),
        None => T::of(j.len() as f64) * T::unit_roundoff() * top,
    };
    let keep: Vec<usize> = (0..values.len()).filter(|&k| values[k].abs() > tol).collect();
    let mut w_pinv = DMatrix::zeros(j.len(), j.len());
    for &k in &keep {
        let v = vectors.column(k);
        w_pinv += v * v.transpose() * (T::one() / values[k]);
    }
    let c = a.columns(j.indices());
    let inner = w_pinv * c.transpose();
    Ok(DenseApprox {
        matrix: symmetrize(&c * inner),
        variant: Variant::Pinv,
        j: j.clone(),
        parameter: tol,
        r_hat: keep.len(),
    })
}

/// `P = C (W)_ε† Sᵀ` as an `n × n` matrix: column `J[k]` of `P` is column
/// `k` of `C (W)_ε†`, all other columns are zero.
pub fn eps_projector<T: Real>(a: &SymMatrix<T>, j: &IndexSet, epsilon: T) -> Result<DMatrix<T>> {
    check_set(a, j)?;
    let pinv = eig_truncate(&a.principal(j.indices()), epsilon)?.pseudo_inverse();
    let cw = a.columns(j.indices()) * pinv;
    let mut p = DMatrix::zeros(a.n(), a.n());
    for (k, &col) in j.indices().iter().enumerate() {
        p.set_column(col, &cw.column(k));
    }
    Ok(p)
}

/// Dispatch on `variant`. `parameter` is ε for `stabilized`, ν for
/// `shifted` (both default to [`default_epsilon`]) and the cutoff for
/// `pinv`; it is ignored otherwise.
pub fn run_variant<T: Real>(
    variant: Variant,
    a: &SymMatrix<T>,
    j: &IndexSet,
    parameter: Option<T>,
) -> Result<Approximation<T>> {
    let eps = || parameter.map_or_else(|| default_epsilon(a), Ok);
    Ok(match variant {
        Variant::Plain => Approximation::Factor(nystrom_plain(a, j)?),
        Variant::Stabilized => Approximation::Factor(nystrom_stabilized(a, j, eps()?)?),
        Variant::Shifted => Approximation::Factor(nystrom_shifted(a, j, eps()?)?),
        Variant::DirectSolve => Approximation::Dense(nystrom_direct_solve(a, j)?),
        Variant::Pinv => Approximation::Dense(nystrom_pinv(a, j, parameter)?),
    })
}
