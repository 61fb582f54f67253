use thiserror::Error;

/// Errors surfaced by model construction, diagonalization and quench analysis.
#[derive(Debug, Error)]
pub enum LmgError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("parity blocks unavailable: bias coupling H[{row},{col}] = {value:e} is nonzero")]
    BiasPresent { row: usize, col: usize, value: f64 },

    #[error("eigensolver failed to converge (worst residual {residual:e})")]
    Convergence { residual: f64 },

    #[error("residual bound violated: {residual:e} exceeds {bound:e}")]
    ResidualBound { residual: f64, bound: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state preparation: {0}")]
    StatePrep(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("unknown figure id `{0}`")]
    UnknownFigure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LmgError>;
