use thiserror::Error;

/// Errors shared by all modules of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported type or rank: {0}")]
    InvalidType(String),

    #[error("elements belong to different based root data")]
    DatumMismatch,

    #[error("scaling vector is not invariant: {0}")]
    InvalidScaling(String),

    #[error("free symbol `{0}` has no field assignment")]
    UnassignedSymbol(String),

    #[error("construction failed: {0}")]
    ConstructionFailure(String),

    #[error("r-cochain rejected: {0}")]
    InvalidRCochain(String),

    #[error("automorphism does not preserve the pinning: {0}")]
    InvalidAutomorphism(String),

    #[error("bounded search exhausted without a witness: {0}")]
    WitnessNotFound(String),

    #[error("torsion bound is inconclusive: {0}")]
    InconclusiveBound(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid data: {0}")]
    InvalidData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
