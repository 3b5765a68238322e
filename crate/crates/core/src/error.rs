//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid densities: n_s = {n_s}, n_d = {n_d}")]
    InvalidDensities { n_s: f64, n_d: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not an X state: {0}")]
    NotXState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point or range outside the requested phase: {0}")]
    RegionMismatch(String),

    #[error("fit window outside scan range: {0}")]
    FitWindow(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
