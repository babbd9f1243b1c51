use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource cap exceeded: {0}")]
    Cap(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Core(hcw_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn from_core(e: hcw_core::Error) -> Self {
        use hcw_core::Error as E;
        match e {
            E::TooLarge(m) => CliError::Cap(m),
            E::Parse(m) => CliError::Parse(m),
            E::InvalidField(_) | E::EmptyIdeal | E::Shape(_) | E::NotHomogeneous(_) | E::NotFound(_) => {
                CliError::Parse(e.to_string())
            }
            other => CliError::Core(other),
        }
    }

    /// 1 for verification failures, 2 for unreadable input, 3 when a
    /// resource cap is hit.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
            CliError::Verification(_) | CliError::Core(_) => 1,
        }
    }
}

impl From<hcw_core::Error> for CliError {
    fn from(e: hcw_core::Error) -> Self {
        Self::from_core(e)
    }
}
