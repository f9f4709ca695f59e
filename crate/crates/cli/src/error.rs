use std::fmt;

/// A failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FIT: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn oracle(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_ORACLE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<kerrmetro::Error> for CliError {
    fn from(e: kerrmetro::Error) -> Self {
        use kerrmetro::Error::*;
        let code = match &e {
            Domain(_) | Config(_) | MissingKey(_) => EXIT_USAGE,
            Fit(_) => EXIT_FIT,
            Cutoff { .. } | Integrator(_) => EXIT_ORACLE,
            Truncation { .. } => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: 1,
            message: format!("i/o error: {e}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
