use thiserror::Error;

/// Errors raised by the numerical library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument or input value violated its documented contract.
    #[error("validation error: {0}")]
    Validation(String),
    /// A result failed a numerical invariant the library checks at runtime.
    #[error("invariant `{name}` violated: {detail}")]
    Invariant { name: &'static str, detail: String },
    /// A decomposition did not converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// The request exceeds a hard size cap.
    #[error("size guard: {0}")]
    SizeGuard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
