//! Process-level error type: every failure is classified by the exit code
//! it should produce (1 usage, 2 bad data, 3 numerical breakdown).

use std::fmt;
use std::io;

#[derive(Debug)]
pub enum AppError {
    /// Misused flags or invalid parameter values.
    Usage(String),
    /// Unreadable, malformed, or structurally invalid input data.
    Data(String),
    /// The computation itself broke down (divergence, singular solve).
    Numeric(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Data(_) => 2,
            AppError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Data(m) | AppError::Numeric(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for AppError {}

impl From<anisolay_core::Error> for AppError {
    fn from(e: anisolay_core::Error) -> Self {
        use anisolay_core::Error::*;
        match e {
            BadParameter(_) => AppError::Usage(e.to_string()),
            SingularSystem | NonFiniteObjective => AppError::Numeric(e.to_string()),
            _ => AppError::Data(e.to_string()),
        }
    }
}

impl From<io::Error> for AppError {
    fn from(e: io::Error) -> Self {
        AppError::Data(e.to_string())
    }
}
