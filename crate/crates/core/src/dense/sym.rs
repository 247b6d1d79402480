use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::real::Real;

/// Dense symmetric matrix.
///
/// Construction symmetrizes the input as `(M + Mᵀ)/2`, which leaves an
/// already symmetric matrix bit-for-bit unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T: Real = f64> {
    data: DMatrix<T>,
    psd_hint: bool,
}

pub(crate) fn check_finite<T: Real>(m: &DMatrix<T>) -> Result<()> {
    if m.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput)
    }
}

impl<T: Real> SymMatrix<T> {
    pub fn new(mut data: DMatrix<T>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols || rows == 0 {
            return Err(Error::shape_mismatch((rows.max(1), rows.max(1)), (rows, cols)));
        }
        check_finite(&data)?;
        let half = T::of(0.5);
        for j in 0..cols {
            for i in (j + 1)..rows {
                let v = (data[(i, j)] + data[(j, i)]) * half;
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        Ok(Self { data, psd_hint: true })
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        Self::new(DMatrix::from_fn(n, n, f))
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { T::zero() }))
    }

    pub fn identity(n: usize) -> Self {
        Self { data: DMatrix::identity(n, n), psd_hint: true }
    }

    pub fn zeros(n: usize) -> Self {
        Self { data: DMatrix::zeros(n, n), psd_hint: true }
    }

    pub fn with_psd_hint(mut self, psd: bool) -> Self {
        self.psd_hint = psd;
        self
    }

    pub fn psd_hint(&self) -> bool {
        self.psd_hint
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<T> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<T> {
        self.data
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.n()).map(|i| self.data[(i, i)]).collect()
    }

    /// Principal submatrix `A(idx, idx)`.
    pub fn principal(&self, idx: &[usize]) -> SymMatrix<T> {
        let k = idx.len();
        let data = DMatrix::from_fn(k, k, |a, b| self.data[(idx[a], idx[b])]);
        Self { data, psd_hint: self.psd_hint }
    }

    /// Column submatrix `A(:, idx)`.
    pub fn columns(&self, idx: &[usize]) -> DMatrix<T> {
        DMatrix::from_fn(self.n(), idx.len(), |i, b| self.data[(i, idx[b])])
    }

    pub fn cast<U: Real>(&self) -> SymMatrix<U> {
        SymMatrix {
            data: self.data.map(|x| U::of(x.as_f64())),
            psd_hint: self.psd_hint,
        }
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }
}
