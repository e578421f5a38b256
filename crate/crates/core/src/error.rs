use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cost guard exceeded: {0}")]
    Guard(String),
    #[error("not on the dual variety: D(m,n) = {0}")]
    OffDual(i128),
    #[error("non-integral root-of-unity sum at modulus {0}")]
    NonIntegral(u64),
    #[error("quadrature did not converge within {nodes} nodes (last relative change {change:e})")]
    Quadrature { nodes: u64, change: f64 },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn guard<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Guard(msg.into()))
}
