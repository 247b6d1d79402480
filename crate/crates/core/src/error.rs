use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by the numerical routines.
///
/// Breakdowns are reported, never masked: the unstable competitor
/// implementations are expected to fail on ill-conditioned inputs and
/// callers record those failures.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input contains NaN or infinite entries")]
    NonFiniteInput,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("rank {rank} out of range for dimension {n}")]
    RankOutOfRange { rank: usize, n: usize },

    #[error("remaining diagonal {value:e} at step {step} is more negative than -epsilon")]
    NegativePivotDominant { step: usize, value: f64 },

    #[error("Cholesky breakdown at step {step}: pivot {pivot:e}")]
    CholeskyBreakdown { step: usize, pivot: f64 },

    /// Fewer numerically positive pivots than requested; `partial` holds
    /// the pivots found before the breakdown.
    #[error("only {} positive pivots available, {requested} requested", partial.len())]
    PivotBreakdown { partial: Vec<usize>, requested: usize },

    #[error("principal submatrix on the index set is numerically singular")]
    SingularSubmatrix,

    #[error("selected columns are numerically rank deficient")]
    RankDeficientSample,

    #[error("linear solve detected an exactly singular pivot")]
    SolverSingular,

    #[error("invalid spectrum: {0}")]
    SpecInvalid(String),

    #[error("malformed line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },

    #[error("empty input")]
    EmptyInput,

    #[error("count {count} out of range for {n} samples")]
    CountOutOfRange { count: usize, n: usize },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
}

impl Error {
    /// Stable identifier used in CLI diagnostics and CSV status columns.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFiniteInput => "NonFiniteInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::RankOutOfRange { .. } => "RankOutOfRange",
            Error::NegativePivotDominant { .. } => "NegativePivotDominant",
            Error::CholeskyBreakdown { .. } => "CholeskyBreakdown",
            Error::PivotBreakdown { .. } => "PivotBreakdown",
            Error::SingularSubmatrix => "SingularSubmatrix",
            Error::RankDeficientSample => "RankDeficientSample",
            Error::SolverSingular => "SolverSingular",
            Error::SpecInvalid(_) => "SpecInvalid",
            Error::MalformedLine { .. } => "MalformedLine",
            Error::EmptyInput => "EmptyInput",
            Error::CountOutOfRange { .. } => "CountOutOfRange",
            Error::ParamOutOfRange(_) => "ParamOutOfRange",
            Error::InvalidIndexSet(_) => "InvalidIndexSet",
        }
    }

    pub(crate) fn shape_mismatch(expected: (usize, usize), got: (usize, usize)) -> Self {
        Error::DimensionMismatch {
            expected: format!("{}x{}", expected.0, expected.1),
            got: format!("{}x{}", got.0, got.1),
        }
    }
}
