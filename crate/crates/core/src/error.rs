use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported degree: {0}")]
    UnsupportedDegree(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Upper bound on the size of any single basis the library will build.
/// Overridden by the `SYMTRACE_MAX_BASIS` environment variable.
pub fn basis_budget() -> usize {
    std::env::var("SYMTRACE_MAX_BASIS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(200_000)
}

pub(crate) fn check_budget(what: &str, size: usize) -> Result<()> {
    let cap = basis_budget();
    if size > cap {
        Err(Error::Resource(format!("{what} has {size} elements, budget is {cap}")))
    } else {
        Ok(())
    }
}
