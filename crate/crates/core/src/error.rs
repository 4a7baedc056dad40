use thiserror::Error;

use crate::slh::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid oscillator parameters: {0}")]
    InvalidOscillator(ValidationReport),

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("matrix is not quasi-unitary: {0}")]
    NotQuasiUnitary(String),

    #[error("state-space model is not physically realizable: {0}")]
    NotRealizable(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("coupling scheme not applicable: {0}")]
    SchemeNotApplicable(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
