//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// The CLI maps `Config`-like variants to exit code 2 and numeric
/// failures to exit code 3.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Precondition on an argument was violated (non-square matrix,
    /// index out of range, odd order where an even one is required, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at (or too close to) a degenerate point,
    /// e.g. `x = ±pole` when building a parallel frame.
    #[error("degenerate point: {0}")]
    Degenerate(String),

    /// Evaluation requested within the guard radius of a field singularity.
    #[error("singular point of the field within distance {distance:.3e}")]
    Singularity { distance: f64 },

    /// Invalid combination of options (wrong grid for a field, radius
    /// enclosing a second singularity, unknown format, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Request exceeds a hard resource guard (e.g. Pfaffian expansion
    /// beyond the supported sphere parameter).
    #[error("resource limit: {0}")]
    Resource(String),

    /// A numeric tolerance or residual was exceeded at run time.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
