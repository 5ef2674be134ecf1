use thiserror::Error;

pub type Result<T> = std::result::Result<T, FitError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The data does not determine the requested flat. `flat_dim` is the
    /// dimension of the affine flat the points actually span, when known.
    #[error("degenerate geometry: {message}")]
    DegenerateGeometry {
        message: String,
        flat_dim: Option<usize>,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl FitError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FitError::InvalidInput(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>, flat_dim: Option<usize>) -> Self {
        FitError::DegenerateGeometry {
            message: msg.into(),
            flat_dim,
        }
    }
}
