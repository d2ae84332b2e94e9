use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("recurrence instability: {0}")]
    Instability(String),
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("near support: {0}")]
    NearSupport(String),
    #[error("multi-cut regime detected: {0}")]
    MultiCut(String),
    #[error("sector mismatch: {0}")]
    Sector(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
