use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A moment matrix failed to factorize or is numerically singular.
    #[error("matrix {name} is numerically singular")]
    Singular { name: &'static str },

    /// A raw squared canonical correlation fell outside [-1e-10, 1 + 1e-10].
    #[error("numerical integrity violation: raw eigenvalue {value} outside [0, 1] beyond tolerance")]
    NumericalIntegrity { value: f64 },

    #[error("invalid panel: {0}")]
    InvalidPanel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("monte carlo replication {index} failed: {source}")]
    Replication {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown format: {0}")]
    UnknownFormat(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
