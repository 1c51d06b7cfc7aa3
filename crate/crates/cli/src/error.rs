use std::fmt;

use sphtrop::rat::fmt_q;
use sphtrop::Q;

#[derive(Debug)]
pub enum CliError {
    /// Bad job file, flag or payload. Exit code 1.
    Input(String),
    /// Working precision ran out before a valuation could be decided. Exit
    /// code 2.
    Precision { message: String, precision: Q },
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input(message.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Precision { .. } => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Precision { message, precision } => {
                writeln!(f, "error: {message}")?;
                write!(
                    f,
                    "hint: cancellation used up the working precision; rerun with a larger --precision (now {}, try {})",
                    fmt_q(precision),
                    fmt_q(&(precision * 2))
                )
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
