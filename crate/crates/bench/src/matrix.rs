use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use nystrom_core::dense::SymMatrix;
use nystrom_core::kernels::{
    gen_diag_counterexample, gen_gaussian_blobs, gen_snn, gen_spsd_spectrum, parse_libsvm, rbf_kernel,
    standardize, subsample, Dataset, KernelSpec,
};

use crate::config::{DataSource, KernelSource, MatrixSource};
use crate::error::{BenchError, Result};

fn load_libsvm(path: &Path, name: &str) -> Result<Dataset> {
    let file = File::open(path)
        .map_err(|e| BenchError::MatrixSourceUnavailable(format!("{}: {e}", path.display())))?;
    Ok(parse_libsvm(BufReader::new(file), name)?)
}

fn load_dataset(data: &DataSource, seed: u64) -> Result<Dataset> {
    match data {
        DataSource::Blobs { n, d, centers, separation } => {
            Ok(gen_gaussian_blobs(*n, *d, *centers, *separation, seed)?)
        }
        DataSource::Libsvm { path } => {
            let name = path.file_name().map_or("libsvm".into(), |s| s.to_string_lossy().into_owned());
            load_libsvm(path, &name)
        }
        DataSource::Cached { name, cache } => {
            let path = cache.join(name);
            if !path.exists() {
                return Err(BenchError::MatrixSourceUnavailable(format!(
                    "{name} is not in {}; run `fetch --dataset {name}` first",
                    cache.display()
                )));
            }
            load_libsvm(&path, name)
        }
    }
}

/// Data set after optional subsampling and standardization, plus the
/// resolved bandwidth.
pub fn kernel_dataset(k: &KernelSource, seed: u64) -> Result<(Dataset, f64)> {
    let mut ds = load_dataset(&k.data, seed)?;
    if let Some(m) = k.subsample {
        if m < ds.n() {
            ds = subsample(&ds, m, seed)?;
        } else if m > ds.n() {
            return Err(BenchError::ConfigInvalid(format!("subsample {m} exceeds {} points", ds.n())));
        }
    }
    if k.standardize {
        ds = standardize(&ds).dataset;
    }
    let sigma = match (k.sigma, k.sigma_per_sqrt_d) {
        (Some(s), None) => s,
        (None, Some(c)) => c * (ds.d() as f64).sqrt(),
        _ => return Err(BenchError::ConfigInvalid("kernel needs exactly one of sigma, sigma_per_sqrt_d".into())),
    };
    Ok((ds, sigma))
}

/// Assemble the test matrix in double precision.
pub fn build_matrix(source: &MatrixSource, seed: u64) -> Result<SymMatrix<f64>> {
    match source {
        MatrixSource::Snn => Ok(gen_snn(seed)),
        MatrixSource::DiagCounterexample { gamma } => Ok(gen_diag_counterexample(*gamma)?),
        MatrixSource::SpsdSpectrum { n, singvals } => Ok(gen_spsd_spectrum(*n, singvals, seed)?),
        MatrixSource::Kernel(k) => {
            let (ds, sigma) = kernel_dataset(k, seed)?;
            Ok(rbf_kernel(&ds, KernelSpec::rbf(sigma)?)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    #[test]
    fn missing_sources_are_reported() {
        let k = |data| {
            MatrixSource::Kernel(KernelSource { data, sigma: Some(1.0), sigma_per_sqrt_d: None, standardize: true, subsample: None })
        };
        let missing = k(DataSource::Libsvm { path: PathBuf::from("/nonexistent/file") });
        assert!(matches!(build_matrix(&missing, 0), Err(BenchError::MatrixSourceUnavailable(_))));
        let cached = k(DataSource::Cached { name: "a9a".into(), cache: PathBuf::from("/nonexistent") });
        assert!(matches!(build_matrix(&cached, 0), Err(BenchError::MatrixSourceUnavailable(_))));
    }

    #[test]
    fn blob_kernel_has_unit_diagonal() {
        let src = MatrixSource::Kernel(KernelSource {
            data: DataSource::Blobs { n: 30, d: 2, centers: 3, separation: 4.0 },
            sigma: None,
            sigma_per_sqrt_d: Some(1.0),
            standardize: true,
            subsample: Some(20),
        });
        let a = build_matrix(&src, 5).unwrap();
        assert_eq!(a.n(), 20);
        assert!(a.diagonal().iter().all(|&d| d == 1.0));
    }
}
