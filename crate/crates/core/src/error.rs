use thiserror::Error;

/// Diagnostics attached to a failed n-inner/n-outer factorization.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FactorDiagnostics {
    pub residual: f64,
    pub gram_defect: f64,
    pub rank: usize,
    /// Indices of outer parts that failed the n-outer test.
    pub non_outer: Vec<usize>,
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HardyError {
    #[error("size error: {0}")]
    Size(String),

    #[error("truncation error: {message} (measured residual {residual:.3e})")]
    Truncation { message: String, residual: f64 },

    #[error(
        "singularity: |f| = {modulus:.3e} < {floor:.1e} at grid index {index} ({} offending indices: {:?})",
        indices.len(), indices
    )]
    Singularity {
        index: usize,
        modulus: f64,
        floor: f64,
        indices: Vec<usize>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("degenerate space: {0}")]
    Degenerate(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error(
        "factorization failed: residual {:.3e}, gram defect {:.3e}, rank {}, non-outer parts {:?} (k_max = {})",
        .0.residual, .0.gram_defect, .0.rank, .0.non_outer, .0.k_max
    )]
    Factorization(FactorDiagnostics),

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, HardyError>;

impl HardyError {
    pub(crate) fn truncation(message: impl Into<String>, residual: f64) -> Self {
        HardyError::Truncation {
            message: message.into(),
            residual,
        }
    }
}
