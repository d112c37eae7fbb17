use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("matrix is not positive semi-definite (smallest eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("rank error: requested {requested} message streams but channel rank is {rank}")]
    Rank { requested: usize, rank: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("quadrature did not converge (last estimates {previous:e} and {last:e})")]
    Convergence { previous: f64, last: f64 },

    #[error("numerical integrity: {0}")]
    Integrity(String),
}

impl Error {
    /// Short machine-readable tag used when errors are recorded in tables.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Contract(_) => "contract",
            Error::NotPsd(_) => "not-psd",
            Error::Degenerate(_) => "degenerate",
            Error::Rank { .. } => "rank",
            Error::Config(_) => "config",
            Error::Convergence { .. } => "convergence",
            Error::Integrity(_) => "integrity",
        }
    }
}
