use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid job: {0}")]
    Schema(String),
    #[error("computation failed in {origin}: {source}")]
    Compute { origin: &'static str, source: chern_core::Error },
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn schema(context: &str, e: chern_core::Error) -> Self {
        CliError::Schema(format!("{context}: {e}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Compute { .. } => 3,
        }
    }
}

impl From<chern_core::Error> for CliError {
    fn from(e: chern_core::Error) -> Self {
        CliError::Compute { origin: e.origin(), source: e }
    }
}
