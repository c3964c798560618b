use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("operator order {order} exceeds the supported maximum of {max}")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("truncation insufficient: boundary population {leak:.3e} exceeds {tolerance:.1e}")]
    Truncation { leak: f64, tolerance: f64 },

    #[error("Fock space of {dim} states exceeds the memory guard of {limit}")]
    MemoryGuard { dim: usize, limit: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
