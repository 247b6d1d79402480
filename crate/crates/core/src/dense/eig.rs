use nalgebra::{DMatrix, SymmetricEigen};

use crate::dense::{check_finite, SymMatrix};
use crate::error::{Error, Result};
use crate::real::Real;

/// Eigenpairs of a symmetric matrix, eigenvalues in nonincreasing order.
pub fn symmetric_eigen_sorted<T: Real>(m: &DMatrix<T>) -> (Vec<T>, DMatrix<T>) {
    let eig = SymmetricEigen::new(m.clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), n, |i, c| eig.eigenvectors[(i, order[c])]);
    (values, vectors)
}

/// `(W)_ε` in factored form: eigenpairs with eigenvalue `>= epsilon`.
#[derive(Debug, Clone)]
pub struct EigTruncation<T: Real = f64> {
    /// Retained eigenvalues, nonincreasing.
    pub values: Vec<T>,
    /// Matching orthonormal eigenvectors, one per column.
    pub vectors: DMatrix<T>,
    pub epsilon: T,
}

impl<T: Real> EigTruncation<T> {
    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// `(W)_ε† = U₁ Σ₁⁻¹ U₁ᵀ`.
    pub fn pseudo_inverse(&self) -> DMatrix<T> {
        let mut scaled = self.vectors.clone();
        for (c, &v) in self.values.iter().enumerate() {
            scaled.column_mut(c).scale_mut(T::one() / v);
        }
        scaled * self.vectors.transpose()
    }
}

/// Eigenvalue truncation of the core matrix; negative eigenvalues are
/// discarded along with everything else below `epsilon`.
pub fn eig_truncate<T: Real>(w: &SymMatrix<T>, epsilon: T) -> Result<EigTruncation<T>> {
    check_finite(w.as_matrix())?;
    if !(epsilon > T::zero()) {
        return Err(Error::ParamOutOfRange(format!("epsilon must be positive, got {epsilon:e}")));
    }
    let (values, vectors) = symmetric_eigen_sorted(w.as_matrix());
    let keep = values.iter().take_while(|&&v| v >= epsilon).count();
    Ok(EigTruncation {
        values: values[..keep].to_vec(),
        vectors: vectors.columns(0, keep).into_owned(),
        epsilon,
    })
}

/// Truncated eigendecomposition `⟦A⟧_r`, the optimal rank-`r` reference.
#[derive(Debug, Clone)]
pub struct TsvdApprox<T: Real = f64> {
    pub rank: usize,
    /// `n × r` orthonormal singular vectors (left = right up to sign).
    pub left: DMatrix<T>,
    /// Singular values `|λ|`, nonincreasing.
    pub singvals: Vec<T>,
    /// The signed eigenvalues matching `singvals`.
    pub eigenvalues: Vec<T>,
}

impl<T: Real> TsvdApprox<T> {
    pub fn reconstruct(&self) -> DMatrix<T> {
        let mut scaled = self.left.clone();
        for (c, &v) in self.eigenvalues.iter().enumerate() {
            scaled.column_mut(c).scale_mut(v);
        }
        scaled * self.left.transpose()
    }
}

pub fn tsvd<T: Real>(a: &SymMatrix<T>, r: usize) -> Result<TsvdApprox<T>> {
    let n = a.n();
    if r == 0 || r > n {
        return Err(Error::RankOutOfRange { rank: r, n });
    }
    check_finite(a.as_matrix())?;
    let (values, vectors) = symmetric_eigen_sorted(a.as_matrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        values[y]
            .abs()
            .partial_cmp(&values[x].abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });
    order.truncate(r);
    Ok(TsvdApprox {
        rank: r,
        left: DMatrix::from_fn(n, r, |i, c| vectors[(i, order[c])]),
        singvals: order.iter().map(|&k| values[k].abs()).collect(),
        eigenvalues: order.iter().map(|&k| values[k]).collect(),
    })
}

/// Singular values of a symmetric matrix, computed once and reused for
/// TSVD baselines and bound evaluation.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Nonincreasing.
    singvals: Vec<f64>,
    /// `tail_sq[k] = Σ_{i >= k} σ_i²`, length `n + 1`.
    tail_sq: Vec<f64>,
}

impl Spectrum {
    pub fn of<T: Real>(a: &SymMatrix<T>) -> Self {
        let eig = a.as_matrix().clone().symmetric_eigenvalues();
        let values = eig.iter().map(|v| v.as_f64().abs()).collect();
        Self::from_singvals(values)
    }

    pub fn from_singvals(mut singvals: Vec<f64>) -> Self {
        singvals.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        let mut tail_sq = vec![0.0; singvals.len() + 1];
        for k in (0..singvals.len()).rev() {
            tail_sq[k] = tail_sq[k + 1] + singvals[k] * singvals[k];
        }
        Self { singvals, tail_sq }
    }

    pub fn singvals(&self) -> &[f64] {
        &self.singvals
    }

    pub fn len(&self) -> usize {
        self.singvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.singvals.is_empty()
    }

    /// `σ_k` with 1-based `k`; zero beyond the dimension.
    pub fn sigma(&self, k: usize) -> f64 {
        if k == 0 {
            return f64::INFINITY;
        }
        self.singvals.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn norm2(&self) -> f64 {
        self.singvals.first().copied().unwrap_or(0.0)
    }

    pub fn frobenius(&self) -> f64 {
        self.tail_sq[0].sqrt()
    }

    /// `‖A − ⟦A⟧_k‖_F`.
    pub fn tsvd_error_frob(&self, k: usize) -> f64 {
        self.tail_sq[k.min(self.singvals.len())].sqrt()
    }

    /// `‖A − ⟦A⟧_k‖_F / ‖A‖_F` (zero for the zero matrix).
    pub fn tsvd_rel_frob(&self, k: usize) -> f64 {
        let total = self.frobenius();
        if total == 0.0 {
            0.0
        } else {
            self.tsvd_error_frob(k) / total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;

    #[test]
    fn diagonal_truncation() {
        let w = SymMatrix::from_diagonal(&[3.0, 2.0, 1.0]).unwrap();
        let t = eig_truncate::<f64>(&w, 1.5).unwrap();
        assert_eq!(t.rank(), 2);
        assert!((t.values[0] - 3.0).abs() < 1e-15 && (t.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn negative_eigenvalues_are_discarded() {
        let w = SymMatrix::from_diagonal(&[1.0, -1e-10]).unwrap();
        let t = eig_truncate::<f64>(&w, 1e-12).unwrap();
        assert_eq!(t.values.len(), 1);
        assert!((t.values[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn retained_count_matches_sorted_spectrum() {
        let mut s = Stream::new(21, 0);
        let g = DMatrix::from_fn(6, 6, |_, _| s.normal());
        let w = SymMatrix::new(&g + g.transpose()).unwrap();
        // oracle: characteristic sort of the full spectrum
        let mut all: Vec<f64> = w.as_matrix().clone().symmetric_eigenvalues().iter().copied().collect();
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = 0.5 * (all[2] + all[3]);
        let expected = all.iter().filter(|&&v| v >= median).count();
        assert_eq!(eig_truncate::<f64>(&w, median).unwrap().rank(), expected);
    }

    #[test]
    fn tsvd_of_diagonal() {
        let a = SymMatrix::from_diagonal(&[3.0, 2.0, 1.0]).unwrap();
        let t = tsvd::<f64>(&a, 2).unwrap();
        assert_eq!(t.singvals.len(), 2);
        assert!((t.singvals[0] - 3.0).abs() < 1e-14);
        let resid = a.as_matrix() - t.reconstruct();
        let top = resid.clone().symmetric_eigenvalues().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((top - 1.0).abs() < 1e-14);
        assert!(tsvd(&a, 0).is_err());
        assert!(tsvd(&a, 4).is_err());
    }

    #[test]
    fn tsvd_full_rank_is_exact() {
        let a = SymMatrix::<f64>::identity(4);
        let t = tsvd(&a, 4).unwrap();
        assert!((t.reconstruct() - a.as_matrix()).norm() < 1e-14);
        let ortho = t.left.transpose() * &t.left - DMatrix::identity(4, 4);
        assert!(ortho.norm() < 1e-12 * 4.0);
    }

    #[test]
    fn spectrum_tails() {
        let sp = Spectrum::from_singvals(vec![1.0, 3.0, 2.0]);
        assert_eq!(sp.singvals(), &[3.0, 2.0, 1.0]);
        assert!((sp.tsvd_error_frob(1) - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(sp.tsvd_error_frob(3), 0.0);
        assert_eq!(sp.sigma(4), 0.0);
    }
}
