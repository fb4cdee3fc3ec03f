use multiplet_core::Error as CoreError;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments or an invalid multiplet specification.
    #[error("{0}")]
    Usage(String),
    /// A validation run found a failing invariant.
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Core(e) if is_spec_error(e) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

/// Core errors caused by what the user asked for rather than by the numerics.
fn is_spec_error(e: &CoreError) -> bool {
    matches!(
        e,
        CoreError::InvalidSpec(_)
            | CoreError::InvalidArgument(_)
            | CoreError::SupportMismatch { .. }
            | CoreError::EmptyGrid(_)
            | CoreError::DegenerateMultiplet { .. }
            | CoreError::DegenerateHigherMultiplet { .. }
            | CoreError::DisplacementBudget { .. }
            | CoreError::AngleOutOfRange(_)
    )
}

pub type CliResult<T> = std::result::Result<T, CliError>;
