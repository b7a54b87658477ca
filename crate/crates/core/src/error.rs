use thiserror::Error;

/// Errors raised by the toolkit.
///
/// The variants map onto the command-line exit codes: `Domain` and
/// `Capability` are input problems, `Fit` is a numerical failure of the
/// extraction stage, `Parse` covers malformed external files.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported combination: {0}")]
    Capability(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Fails with a domain error unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and > 0, got {value}"))
    }
}
