use thiserror::Error;

/// Errors raised by the GZ toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GzError {
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("polynomial does not split over the Gaussian rationals; supply its roots instead")]
    NotSplit,

    #[error("matrix is not regular")]
    NotRegular,

    #[error("spectrum does not match matrix: {0}")]
    SpectrumMismatch(String),

    #[error("exact-mode exponential needs a nilpotent argument; use float mode")]
    NonNilpotent,

    #[error("singular linearized system at level {level}")]
    SingularSystem { level: usize },

    #[error("singular matrix")]
    Singular,

    #[error("invalid choice: {0}")]
    InvalidChoice(String),

    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),

    #[error("singular Toeplitz element in block {0}")]
    SingularToeplitz(usize),

    #[error("matrix is not strongly regular")]
    NotStronglyRegular,

    #[error("strong-regularity tests disagree: {0}")]
    ToleranceDisagreement(String),

    #[error("ambiguous border coordinates at level {level}: {detail}")]
    Ambiguous { level: usize, detail: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("malformed input: {0}")]
    Schema(String),
}

impl GzError {
    /// Short machine-readable tag, used in CLI error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            GzError::IndexOutOfRange { .. } => "index_out_of_range",
            GzError::DimensionMismatch(_) => "dimension_mismatch",
            GzError::InvalidTolerance(_) => "invalid_tolerance",
            GzError::NotSplit => "not_split",
            GzError::NotRegular => "not_regular",
            GzError::SpectrumMismatch(_) => "spectrum_mismatch",
            GzError::NonNilpotent => "non_nilpotent",
            GzError::SingularSystem { .. } => "singular_system",
            GzError::Singular => "singular",
            GzError::InvalidChoice(_) => "invalid_choice",
            GzError::InvalidParams(_) => "invalid_params",
            GzError::SingularToeplitz(_) => "singular_toeplitz",
            GzError::NotStronglyRegular => "not_strongly_regular",
            GzError::ToleranceDisagreement(_) => "tolerance_disagreement",
            GzError::Ambiguous { .. } => "ambiguous",
            GzError::Internal(_) => "internal",
            GzError::Schema(_) => "schema",
        }
    }
}

pub type Result<T> = std::result::Result<T, GzError>;
