use nalgebra::DMatrix;

use crate::dense::{thin_qr, SymMatrix};
use crate::error::{Error, Result};
use crate::kernels::Dataset;
use crate::rng::Stream;

/// Dimension of the SNN test matrix.
pub const SNN_DIM: usize = 1000;

const SNN_DENSITY: f64 = 0.01;

/// Sparse nonnegative sum of outer products with a three-level spectrum:
///
/// `Σ_{j≤150} x_j x_jᵀ / j + Σ_{150<j≤350} 10⁻⁵ x_j x_jᵀ / j + Σ_{350<j≤500} 10⁻¹⁰ x_j x_jᵀ / j`
///
/// Vector `x_j` is drawn from stream `j` of `seed`: for each of the 1000
/// coordinates a uniform draw below 0.01 makes it nonzero, and the value is
/// the next standard normal draw.
pub fn gen_snn(seed: u64) -> SymMatrix<f64> {
    let mut a = DMatrix::<f64>::zeros(SNN_DIM, SNN_DIM);
    let mut support: Vec<(usize, f64)> = Vec::new();
    for j in 1..=500u64 {
        let level = match j {
            1..=150 => 1.0,
            151..=350 => 1e-5,
            _ => 1e-10,
        };
        let coeff = level / j as f64;
        let mut stream = Stream::new(seed, j);
        support.clear();
        for i in 0..SNN_DIM {
            if stream.uniform() < SNN_DENSITY {
                support.push((i, stream.normal()));
            }
        }
        for &(p, xp) in &support {
            for &(q, xq) in &support {
                a[(p, q)] += coeff * (xp * xq);
            }
        }
    }
    SymMatrix::new(a).expect("finite by construction").with_psd_hint(true)
}

/// `diag(1, γ², 0)` for `0 < γ ≤ 1`.
pub fn gen_diag_counterexample(gamma: f64) -> Result<SymMatrix<f64>> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::ParamOutOfRange(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(SymMatrix::from_diagonal(&[1.0, gamma * gamma, 0.0])?.with_psd_hint(true))
}

/// `Q Λ Qᵀ` with `Λ = diag(singvals, 0, ..., 0)` and `Q` Haar orthogonal:
/// the QR factor of an `n × n` standard normal matrix (stream 0 of `seed`,
/// filled column by column) with columns signed so that `diag(R) ≥ 0`.
pub fn gen_spsd_spectrum(n: usize, singvals: &[f64], seed: u64) -> Result<SymMatrix<f64>> {
    if n == 0 {
        return Err(Error::SpecInvalid("dimension must be positive".into()));
    }
    if singvals.len() > n {
        return Err(Error::SpecInvalid(format!("{} values for dimension {n}", singvals.len())));
    }
    if singvals.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
        return Err(Error::SpecInvalid("values must be finite and nonnegative".into()));
    }
    if singvals.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::SpecInvalid("values must be nonincreasing".into()));
    }
    let mut stream = Stream::new(seed, 0);
    let g = DMatrix::from_fn(n, n, |_, _| stream.normal());
    let qr = thin_qr(&g)?;
    let k = singvals.len();
    let mut q = qr.q.columns(0, k).into_owned();
    for c in 0..k {
        if qr.r_factor[(c, c)] < 0.0 {
            q.column_mut(c).neg_mut();
        }
    }
    let mut scaled = q.clone();
    for (c, &s) in singvals.iter().enumerate() {
        scaled.column_mut(c).scale_mut(s);
    }
    Ok(SymMatrix::new(scaled * q.transpose())?.with_psd_hint(true))
}

/// `n` points in `d` dimensions around `k` centers. Centers are standard
/// normal scaled by `separation`; points add unit normal noise. Point `i`
/// belongs to cluster `i mod k`, which is also its label. All draws come
/// from stream 0 of `seed`, centers first.
pub fn gen_gaussian_blobs(n: usize, d: usize, k: usize, separation: f64, seed: u64) -> Result<Dataset> {
    if n == 0 || d == 0 || k == 0 {
        return Err(Error::EmptyInput);
    }
    let mut stream = Stream::new(seed, 0);
    let centers = DMatrix::from_fn(k, d, |_, _| separation * stream.normal());
    let mut points = DMatrix::zeros(n, d);
    for i in 0..n {
        for f in 0..d {
            points[(i, f)] = centers[(i % k, f)] + stream.normal();
        }
    }
    let labels = (0..n).map(|i| (i % k) as f64).collect();
    Dataset::new(format!("blobs-{n}x{d}-k{k}"), points, Some(labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_is_exact() {
        let a = gen_diag_counterexample(1e-8).unwrap();
        assert_eq!(a.diagonal(), vec![1.0, 1e-8 * 1e-8, 0.0]);
        assert_eq!(gen_diag_counterexample(1.0).unwrap().diagonal(), vec![1.0, 1.0, 0.0]);
        assert!(gen_diag_counterexample(0.0).is_err());
        assert!(gen_diag_counterexample(1.5).is_err());
    }

    #[test]
    fn unit_spectrum_gives_identity() {
        let a = gen_spsd_spectrum(6, &[1.0; 6], 3).unwrap();
        let dev = (a.as_matrix() - DMatrix::<f64>::identity(6, 6)).abs().max();
        assert!(dev < 1e-14, "{dev:e}");
    }

    #[test]
    fn spectrum_validation() {
        assert!(matches!(gen_spsd_spectrum(2, &[1.0, 2.0], 0), Err(Error::SpecInvalid(_))));
        assert!(matches!(gen_spsd_spectrum(1, &[1.0, 0.5], 0), Err(Error::SpecInvalid(_))));
        assert!(matches!(gen_spsd_spectrum(2, &[-1.0], 0), Err(Error::SpecInvalid(_))));
    }

    #[test]
    fn blobs_are_reproducible() {
        let a = gen_gaussian_blobs(20, 3, 4, 5.0, 1).unwrap();
        let b = gen_gaussian_blobs(20, 3, 4, 5.0, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.labels().unwrap()[5], 1.0);
    }
}
