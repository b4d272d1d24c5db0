//! Error types shared across the engine.
//!
//! Two severities exist and they map onto the command-line exit codes:
//! invalid input (exit 2) for anything a caller handed us that fails validation, and
//! internal invariant violations (exit 3) for cross-checks that the engine performs on
//! its own results — if one of those fires, the run must not be trusted.

use thiserror::Error;

/// Engine-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors produced by the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller's data failed validation. The `kind` is a stable machine-readable
    /// identifier (e.g. `"not-convex-position"`, `"origin-not-interior"`).
    #[error("invalid input ({kind}): {message}")]
    InvalidInput { kind: &'static str, message: String },

    /// An internal cross-check failed; results cannot be trusted.
    #[error("internal invariant violation: {0}")]
    Internal(String),
}

impl Error {
    /// Invalid-input constructor with a stable kind identifier.
    pub fn invalid(kind: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidInput { kind, message: message.into() }
    }

    /// Internal invariant violation constructor.
    pub fn internal(message: impl Into<String>) -> Self {
        Error::Internal(message.into())
    }

    /// Process exit code this error maps to (invalid input → 2, internal → 3).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput { .. } => 2,
            Error::Internal(_) => 3,
        }
    }

    /// Stable machine-readable kind string.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput { kind, .. } => kind,
            Error::Internal(_) => "internal-invariant",
        }
    }
}

/// Convenience macro: return an invalid-input error.
#[macro_export]
macro_rules! bail_invalid {
    ($kind:expr, $($arg:tt)*) => {
        return Err($crate::error::Error::invalid($kind, format!($($arg)*)))
    };
}

/// Convenience macro: return an internal invariant violation.
#[macro_export]
macro_rules! bail_internal {
    ($($arg:tt)*) => {
        return Err($crate::error::Error::internal(format!($($arg)*)))
    };
}

/// Internal-invariant assertion: like `assert!` but returns an `Error::Internal`
/// instead of panicking, so the CLI can exit with code 3.
#[macro_export]
macro_rules! ensure_internal {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err($crate::error::Error::internal(format!($($arg)*)));
        }
    };
}
