use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Domain` covers invalid mathematical input (genus too small, malformed or
/// disconnected graphs, out-of-range degrees). `Range` flags an index outside
/// its documented interval. `NotApplicable` marks a test-family construction
/// requested outside the degree range where the family is defined, which is
/// not a usage mistake. `Verification` means an internal consistency sweep
/// failed; it should never occur and indicates a genuine defect.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("verification failure: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
