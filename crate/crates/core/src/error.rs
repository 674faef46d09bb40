use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// An index or word outside the admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse scalar {input:?}: {reason}")]
    ScalarParse { input: String, reason: String },

    /// Malformed module-spec document; `line` is 1-based when known.
    #[error("format error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("unsupported Θ-degree {found} (at most {max} is supported here)")]
    UnsupportedDegree { found: u32, max: u32 },

    #[error("unknown built-in module {0:?} (expected trivial, vector or adjoint)")]
    UnknownModule(String),

    #[error("module validation failed: {0}")]
    Validation(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn format(message: impl Into<String>) -> Self {
        Error::Format {
            line: None,
            message: message.into(),
        }
    }
}
