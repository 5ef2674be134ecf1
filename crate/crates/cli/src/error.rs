use std::io;

use thiserror::Error;
use tlsfit_core::FitError;

pub type Result<T> = std::result::Result<T, CliError>;

/// Failures of a CLI command, each mapped to a documented exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(
        "parse error at line {line}, column `{column}`: cannot read `{value}` as a finite number"
    )]
    Parse {
        line: u64,
        column: String,
        value: String,
    },

    #[error("malformed input: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot read {path}: {source}")]
    Input { path: String, source: io::Error },

    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),

    #[error(transparent)]
    Fit(#[from] FitError),
}

impl CliError {
    /// 2 usage, 3 input/parse/schema, 4 degenerate geometry, 5 numerical
    /// failure, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Schema(_)
            | CliError::Parse { .. }
            | CliError::Csv(_)
            | CliError::Input { .. } => 3,
            CliError::Fit(FitError::InvalidInput(_)) => 3,
            CliError::Fit(FitError::DegenerateGeometry { .. }) => 4,
            CliError::Fit(FitError::NumericalFailure(_)) => 5,
            CliError::Output(_) => 1,
        }
    }
}
