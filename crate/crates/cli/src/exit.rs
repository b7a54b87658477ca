use std::fmt;

use casimir_core::Error;

pub const USAGE: i32 = 64;
pub const BAD_CONFIG: i32 = 65;
pub const DOMAIN: i32 = 2;
pub const FIT: i32 = 3;
pub const IO: i32 = 74;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: USAGE,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: BAD_CONFIG,
            message: message.into(),
        }
    }

    pub fn io(context: &str, err: impl fmt::Display) -> Self {
        CliError {
            code: IO,
            message: format!("{context}: {err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Capability(_) => DOMAIN,
            Error::Fit(_) => FIT,
            Error::Parse(_) => BAD_CONFIG,
            Error::Io(_) => IO,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
