use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {dim} exceeds the configured ceiling {max} (set RIGIDITY_MAX_DIM to raise it)")]
    DimensionCeiling { dim: usize, max: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not Hermitian: ||A - A^H||_F = {asymmetry:e} exceeds {tolerance:e} * ||A||_F")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("R-matrix is singular at tolerance {tolerance:e} (smallest/largest singular value = {ratio:e})")]
    SingularRMatrix { ratio: f64, tolerance: f64 },

    #[error("invalid site indices: {0}")]
    InvalidSites(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spectral family evaluation failed at u = {re}{im:+}i: {reason}")]
    FamilyEvaluation { re: f64, im: f64, reason: String },

    #[error("Bethe root {index} sits on a pole of the Bethe equations")]
    Pole { index: usize },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("magnon sector extraction failed: off-sector leakage {leakage:e} above tolerance")]
    SectorExtraction { leakage: f64 },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
