//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//! selector = "refined"            # greedy | qrcp | uniform | refined
//! variants = ["plain", "stabilized", "shifted", "direct_solve", "pinv"]
//! ranks = "10:500:10"             # or an explicit list: [10, 20, 40]
//! epsilon = "ten_u_norm"          # or a fixed value: 1e-12
//! precision = "double"            # double | single
//! timing = true
//! refine_delta = 0.01
//! output = "snn.csv"
//!
//! [matrix]
//! source = "snn"                  # snn | diag_counterexample | spsd_spectrum | kernel
//! ```
//!
//! Kernel sources name a data set and a bandwidth, either absolute
//! (`sigma`) or relative to the feature dimension (`sigma_per_sqrt_d`,
//! giving `σ = value · √d`):
//!
//! ```toml
//! [matrix]
//! source = "kernel"
//! sigma_per_sqrt_d = 30.0
//! standardize = true
//! subsample = 2000
//!
//! [matrix.data]
//! kind = "blobs"                  # blobs | libsvm | cached
//! n = 500
//! d = 5
//! centers = 4
//! separation = 3.0
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nystrom_core::colselect::DEFAULT_DELTA;
use nystrom_core::nystrom::Variant;
use serde::{Deserialize, Deserializer};

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    #[default]
    Double,
    Single,
}

impl FromStr for Precision {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "single" => Ok(Precision::Single),
            _ => Err(BenchError::ConfigInvalid(format!("unknown precision {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selector {
    Greedy,
    Qrcp,
    Uniform,
    #[default]
    Refined,
}

impl Selector {
    pub fn as_str(self) -> &'static str {
        match self {
            Selector::Greedy => "greedy",
            Selector::Qrcp => "qrcp",
            Selector::Uniform => "uniform",
            Selector::Refined => "refined",
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Selector {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        [Selector::Greedy, Selector::Qrcp, Selector::Uniform, Selector::Refined]
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| BenchError::ConfigInvalid(format!("unknown selector {s:?}")))
    }
}

/// Truncation threshold and shift.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EpsilonRule {
    /// `10 · u · ‖A‖₂`, with `u` of the working precision and the norm from
    /// power iteration.
    #[default]
    TenUNorm,
    Fixed(f64),
}

impl<'de> Deserialize<'de> for EpsilonRule {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Value(f64),
            Name(String),
        }
        match Repr::deserialize(de)? {
            Repr::Value(v) if v > 0.0 && v.is_finite() => Ok(EpsilonRule::Fixed(v)),
            Repr::Value(v) => Err(serde::de::Error::custom(format!("epsilon must be positive, got {v}"))),
            Repr::Name(s) if s == "ten_u_norm" => Ok(EpsilonRule::TenUNorm),
            Repr::Name(s) => Err(serde::de::Error::custom(format!("unknown epsilon rule {s:?}"))),
        }
    }
}

/// Parse an inclusive rank range `a:b:step`.
pub fn parse_rank_range(s: &str) -> Result<Vec<usize>> {
    let bad = || BenchError::ConfigInvalid(format!("rank range must be a:b:step, got {s:?}"));
    let parts: Vec<usize> = s.split(':').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if step == 0 || a == 0 || a > b {
        return Err(bad());
    }
    Ok((a..=b).step_by(step).collect())
}

fn de_ranks<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<usize>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        List(Vec<usize>),
        Range(String),
    }
    match Repr::deserialize(de)? {
        Repr::List(v) => Ok(v),
        Repr::Range(s) => parse_rank_range(&s).map_err(serde::de::Error::custom),
    }
}

fn de_variants<'de, D: Deserializer<'de>>(de: D) -> std::result::Result<Vec<Variant>, D::Error> {
    Vec::<String>::deserialize(de)?
        .iter()
        .map(|s| s.parse::<Variant>().map_err(serde::de::Error::custom))
        .collect()
}

fn all_variants() -> Vec<Variant> {
    Variant::ALL.to_vec()
}

fn default_delta() -> f64 {
    DEFAULT_DELTA
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    /// Synthetic Gaussian clusters, generated from the experiment seed.
    Blobs { n: usize, d: usize, centers: usize, separation: f64 },
    /// A LIBSVM text file.
    Libsvm { path: PathBuf },
    /// A data set previously downloaded with `fetch`.
    Cached { name: String, cache: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct KernelSource {
    pub data: DataSource,
    pub sigma: Option<f64>,
    pub sigma_per_sqrt_d: Option<f64>,
    #[serde(default = "yes")]
    pub standardize: bool,
    pub subsample: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum MatrixSource {
    Snn,
    DiagCounterexample { gamma: f64 },
    SpsdSpectrum { n: usize, singvals: Vec<f64> },
    Kernel(KernelSource),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub matrix: MatrixSource,
    #[serde(default)]
    pub selector: Selector,
    #[serde(default = "all_variants", deserialize_with = "de_variants")]
    pub variants: Vec<Variant>,
    #[serde(deserialize_with = "de_ranks")]
    pub ranks: Vec<usize>,
    #[serde(default)]
    pub epsilon: EpsilonRule,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Record wall-clock time per variant call. Off makes the CSV
    /// byte-reproducible.
    #[serde(default = "yes")]
    pub timing: bool,
    #[serde(default = "default_delta")]
    pub refine_delta: f64,
}

impl ExperimentConfig {
    pub fn new(matrix: MatrixSource, ranks: Vec<usize>) -> Self {
        Self {
            matrix,
            selector: Selector::default(),
            variants: all_variants(),
            ranks,
            epsilon: EpsilonRule::default(),
            precision: Precision::default(),
            seed: 0,
            output: None,
            timing: true,
            refine_delta: DEFAULT_DELTA,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BenchError::ConfigInvalid(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::ConfigInvalid(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Checks that do not need the matrix; rank bounds are checked once
    /// the dimension is known.
    pub fn validate(&self) -> Result<()> {
        if self.ranks.is_empty() {
            return Err(BenchError::ConfigInvalid("ranks must not be empty".into()));
        }
        if self.ranks.contains(&0) {
            return Err(BenchError::ConfigInvalid("ranks must be positive".into()));
        }
        if self.variants.is_empty() {
            return Err(BenchError::ConfigInvalid("variants must not be empty".into()));
        }
        if !(self.refine_delta > 0.0 && self.refine_delta.is_finite()) {
            return Err(BenchError::ConfigInvalid("refine_delta must be positive".into()));
        }
        if let MatrixSource::Kernel(k) = &self.matrix {
            match (k.sigma, k.sigma_per_sqrt_d) {
                (Some(s), None) | (None, Some(s)) if s > 0.0 && s.is_finite() => {}
                _ => {
                    return Err(BenchError::ConfigInvalid(
                        "kernel needs exactly one positive bandwidth: sigma or sigma_per_sqrt_d".into(),
                    ))
                }
            }
        }
        Ok(())
    }
}
