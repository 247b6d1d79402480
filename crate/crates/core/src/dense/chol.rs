use nalgebra::DMatrix;

use crate::dense::{check_finite, SymMatrix};
use crate::error::{Error, Result};
use crate::real::Real;

/// ε-truncated pivoted Cholesky factor of an `r × r` symmetric matrix `W`.
///
/// `rows` is the `r̂ × r` upper-trapezoidal factor `R` in pivot order, so
/// that `W(perm, perm) ≈ RᵀR`; the residual `W(perm, perm) − RᵀR` is the
/// trailing Schur complement whose diagonal entries are all below `epsilon`.
#[derive(Debug, Clone)]
pub struct TruncCholFactor<T: Real = f64> {
    pub r_hat: usize,
    pub r: usize,
    pub rows: DMatrix<T>,
    pub perm: Vec<usize>,
    pub epsilon: T,
}

impl<T: Real> TruncCholFactor<T> {
    /// Squared diagonal entries of `R`, i.e. the accepted pivots.
    pub fn pivots(&self) -> Vec<T> {
        (0..self.r_hat).map(|k| self.rows[(k, k)] * self.rows[(k, k)]).collect()
    }

    /// `Π (RᵀR) Πᵀ` in the original index order.
    pub fn reconstruct(&self) -> DMatrix<T> {
        let rtr = self.rows.transpose() * &self.rows;
        let mut out = DMatrix::zeros(self.r, self.r);
        for b in 0..self.r {
            for a in 0..self.r {
                out[(self.perm[a], self.perm[b])] = rtr[(a, b)];
            }
        }
        out
    }
}

/// Stopping rule for the pivoted Cholesky kernel.
#[derive(Debug, Clone, Copy)]
pub(crate) enum PivotStop<T> {
    /// Stop once the largest remaining diagonal is `< epsilon`; fail if the
    /// most negative remaining diagonal is `< -epsilon`.
    Truncate { epsilon: T },
    /// Stop once the largest remaining diagonal is `<= floor`.
    Positive { floor: T },
}

pub(crate) struct PivotRun<T: Real> {
    pub rows: DMatrix<T>,
    pub perm: Vec<usize>,
    pub steps: usize,
}

/// Complete-pivoting Cholesky on a dense copy of `w`, at most `max_steps`
/// pivots. Equal candidate pivots go to the smallest original index.
pub(crate) fn pivoted_cholesky_core<T: Real>(
    w: &DMatrix<T>,
    stop: PivotStop<T>,
    max_steps: usize,
) -> Result<PivotRun<T>> {
    let r = w.nrows();
    let mut a = w.clone();
    let mut perm: Vec<usize> = (0..r).collect();
    let mut rows = DMatrix::<T>::zeros(r, r);
    let max_steps = max_steps.min(r);
    let mut steps = 0;

    while steps < max_steps {
        let k = steps;
        let mut p = k;
        let mut best = a[(k, k)];
        let mut lowest = a[(k, k)];
        for i in (k + 1)..r {
            let d = a[(i, i)];
            if d > best || (d == best && perm[i] < perm[p]) {
                best = d;
                p = i;
            }
            if d < lowest {
                lowest = d;
            }
        }
        match stop {
            PivotStop::Truncate { epsilon } => {
                if lowest < -epsilon {
                    return Err(Error::NegativePivotDominant { step: k, value: lowest.as_f64() });
                }
                if !(best >= epsilon) {
                    break;
                }
            }
            PivotStop::Positive { floor } => {
                if !(best > floor) {
                    break;
                }
            }
        }

        if p != k {
            a.swap_rows(k, p);
            a.swap_columns(k, p);
            perm.swap(k, p);
            for row in 0..k {
                let tmp = rows[(row, k)];
                rows[(row, k)] = rows[(row, p)];
                rows[(row, p)] = tmp;
            }
        }

        let rkk = a[(k, k)].sqrt();
        rows[(k, k)] = rkk;
        for j in (k + 1)..r {
            rows[(k, j)] = a[(k, j)] / rkk;
        }
        let rk: Vec<T> = (0..r).map(|j| rows[(k, j)]).collect();
        for j in (k + 1)..r {
            let rkj = rk[j];
            if rkj == T::zero() {
                continue;
            }
            let col = &mut a.as_mut_slice()[j * r..(j + 1) * r];
            for i in (k + 1)..r {
                col[i] -= rk[i] * rkj;
            }
        }
        steps += 1;
    }

    Ok(PivotRun { rows: rows.rows(0, steps).into_owned(), perm, steps })
}

/// ε-truncated Cholesky with complete (diagonal) pivoting.
///
/// Runs until the largest remaining Schur-complement diagonal drops below
/// `epsilon` (absolute threshold). Small negative diagonals are tolerated;
/// one below `-epsilon` is reported as `NegativePivotDominant` so that the
/// caller can switch to [`eig_truncate`](crate::dense::eig_truncate).
pub fn pivoted_cholesky_trunc<T: Real>(w: &SymMatrix<T>, epsilon: T) -> Result<TruncCholFactor<T>> {
    if !(epsilon > T::zero()) {
        return Err(Error::ParamOutOfRange(format!("epsilon must be positive, got {epsilon:e}")));
    }
    let m = w.as_matrix();
    check_finite(m)?;
    let run = pivoted_cholesky_core(m, PivotStop::Truncate { epsilon }, m.nrows())?;
    Ok(TruncCholFactor {
        r_hat: run.steps,
        r: m.nrows(),
        rows: run.rows,
        perm: run.perm,
        epsilon,
    })
}

/// Unpivoted Cholesky `W = RᵀR`, `R` upper triangular. Any pivot that is
/// not strictly positive is reported as a breakdown.
pub fn cholesky_upper<T: Real>(w: &DMatrix<T>) -> Result<DMatrix<T>> {
    let n = w.nrows();
    if w.ncols() != n {
        return Err(Error::shape_mismatch((n, n), w.shape()));
    }
    let mut r = DMatrix::<T>::zeros(n, n);
    for j in 0..n {
        // r[.., j] from column j of W
        for i in 0..j {
            let mut s = w[(i, j)];
            for k in 0..i {
                s -= r[(k, i)] * r[(k, j)];
            }
            r[(i, j)] = s / r[(i, i)];
        }
        let mut d = w[(j, j)];
        for k in 0..j {
            d -= r[(k, j)] * r[(k, j)];
        }
        if !(d > T::zero()) {
            return Err(Error::CholeskyBreakdown { step: j, pivot: d.as_f64() });
        }
        r[(j, j)] = d.sqrt();
    }
    Ok(r)
}
