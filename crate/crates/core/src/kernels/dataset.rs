use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::{partial_shuffle, Stream};

/// `n` points in `d` dimensions, one per row, with optional real labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    points: DMatrix<f64>,
    labels: Option<Vec<f64>>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, points: DMatrix<f64>, labels: Option<Vec<f64>>) -> Result<Self> {
        let (n, d) = points.shape();
        if n == 0 || d == 0 {
            return Err(Error::EmptyInput);
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::DimensionMismatch { expected: format!("{n} labels"), got: format!("{}", l.len()) });
            }
            if l.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFiniteInput);
            }
        }
        Ok(Self { name: name.into(), points, labels })
    }

    pub fn n(&self) -> usize {
        self.points.nrows()
    }

    pub fn d(&self) -> usize {
        self.points.ncols()
    }

    pub fn points(&self) -> &DMatrix<f64> {
        &self.points
    }

    pub fn labels(&self) -> Option<&[f64]> {
        self.labels.as_deref()
    }
}

/// A standardized data set and the features that had zero variance (and
/// were mapped to all zeros).
#[derive(Debug, Clone)]
pub struct Standardized {
    pub dataset: Dataset,
    pub zero_variance: Vec<usize>,
}

/// Per-feature zero mean and unit population variance (divide by `n`).
///
/// A feature counts as constant when its standard deviation is at most
/// `n · u` times its largest magnitude.
pub fn standardize(ds: &Dataset) -> Standardized {
    let n = ds.n();
    let mut points = ds.points.clone();
    let mut zero_variance = Vec::new();
    for f in 0..ds.d() {
        let mut col = points.column_mut(f);
        let mean = col.iter().sum::<f64>() / n as f64;
        let var = col.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let scale = col.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let sd = var.sqrt();
        if sd <= n as f64 * f64::EPSILON / 2.0 * scale {
            col.fill(0.0);
            zero_variance.push(f);
        } else {
            col.apply(|x| *x = (*x - mean) / sd);
        }
    }
    Standardized {
        dataset: Dataset { name: ds.name.clone(), points, labels: ds.labels.clone() },
        zero_variance,
    }
}

/// `m` distinct rows drawn uniformly without replacement (stream 0 of
/// `seed`), kept in their original order.
pub fn subsample(ds: &Dataset, m: usize, seed: u64) -> Result<Dataset> {
    let n = ds.n();
    if m == 0 || m > n {
        return Err(Error::CountOutOfRange { count: m, n });
    }
    let mut rows = partial_shuffle(n, m, &mut Stream::new(seed, 0));
    rows.sort_unstable();
    Ok(Dataset {
        name: ds.name.clone(),
        points: ds.points.select_rows(&rows),
        labels: ds.labels.as_ref().map(|l| rows.iter().map(|&i| l[i]).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let ds = Dataset::new("t", DMatrix::from_row_slice(2, 1, &[0.0, 2.0]), None).unwrap();
        let s = standardize(&ds);
        assert_eq!(s.dataset.points().as_slice(), &[-1.0, 1.0]);
        assert!(s.zero_variance.is_empty());
    }

    #[test]
    fn constant_feature_is_zeroed_and_reported() {
        let ds = Dataset::new("t", DMatrix::from_row_slice(3, 2, &[0.1, 1.0, 0.1, 2.0, 0.1, 3.0]), None).unwrap();
        let s = standardize(&ds);
        assert_eq!(s.zero_variance, vec![0]);
        assert!(s.dataset.points().column(0).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn subsample_bounds() {
        let ds = Dataset::new("t", DMatrix::from_fn(5, 1, |i, _| i as f64), Some(vec![0.0; 5])).unwrap();
        assert_eq!(subsample(&ds, 5, 9).unwrap(), ds);
        assert!(matches!(subsample(&ds, 0, 9), Err(Error::CountOutOfRange { .. })));
        assert!(matches!(subsample(&ds, 6, 9), Err(Error::CountOutOfRange { .. })));
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(matches!(Dataset::new("t", DMatrix::zeros(0, 2), None), Err(Error::EmptyInput)));
        let mut p = DMatrix::zeros(2, 2);
        p[(1, 1)] = f64::INFINITY;
        assert!(matches!(Dataset::new("t", p, None), Err(Error::NonFiniteInput)));
    }
}
