use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Core(#[from] vishift_core::Error),

    #[error("cap exceeded: {0}")]
    Cap(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_FAILED: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use vishift_core::Error as E;
        match self {
            CliError::Parse(_) | CliError::Io(_) => EXIT_INVALID,
            CliError::Cap(_) | CliError::Core(E::TooLarge { .. }) => EXIT_CAP,
            CliError::Core(E::CertificateExhausted { .. } | E::NoExactFit { .. }) => EXIT_FAILED,
            CliError::Core(_) => EXIT_INVALID,
        }
    }
}
