use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] wigsim_core::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 1 for validation/parse/io failures, 2 for
    /// numerical blowup.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(wigsim_core::Error::NumericalBlowup { .. }) => 2,
            _ => 1,
        }
    }
}
