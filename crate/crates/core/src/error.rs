use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A state or distribution has zero total weight.
    #[error("degenerate state: {0}")]
    Degenerate(String),

    /// The request exceeds what the dense representation supports.
    #[error("resource limit: {0}")]
    Resource(String),

    /// gcd(y, N) is a nontrivial factor, so no order finding is needed.
    #[error("gcd({y}, {n}) = {factor} is a nontrivial factor of {n}")]
    LuckyFactor { y: u64, n: u64, factor: u64 },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed data in {}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
