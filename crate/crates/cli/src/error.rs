use std::fmt;

use toepfactor::error::Error;

pub const EX_USAGE: i32 = 64;
pub const EX_DATAERR: i32 = 65;
pub const EX_NOINPUT: i32 = 66;
pub const EX_SOFTWARE: i32 = 70;
pub const EX_CANTCREAT: i32 = 73;
/// `factor`: no constructive route exists for this input.
pub const EX_NO_CONSTRUCTION: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub msg: String,
}

impl CliError {
    pub fn new(code: i32, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Self::new(EX_USAGE, msg)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvertibleFallback { .. } | Error::NoConstruction { .. } => EX_NO_CONSTRUCTION,
            Error::VerificationFailed { .. } | Error::CertificateMismatch(_) => EX_SOFTWARE,
            _ => EX_DATAERR,
        };
        CliError::new(code, e.to_string())
    }
}
