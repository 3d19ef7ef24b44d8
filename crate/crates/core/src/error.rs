use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite angle: {name} = {value}")]
    NonFiniteAngle { name: &'static str, value: f64 },

    #[error("theta = {0} is outside [0, pi]")]
    ThetaOutOfRange(f64),

    #[error("state is not normalized: squared norm {norm_sqr} deviates from 1 by more than {tol}")]
    NotNormalized { norm_sqr: f64, tol: f64 },

    #[error("basis is not orthonormal: |<up|down>| = {overlap}")]
    NotOrthonormal { overlap: f64 },

    #[error("length mismatch: {inputs} inputs vs {outputs} outputs")]
    LengthMismatch { inputs: usize, outputs: usize },

    #[error("state list is empty")]
    EmptyStateList,

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub(crate) fn check_tolerance(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}
