use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported quadrature order {order} for {kind} rule")]
    UnsupportedOrder { kind: &'static str, order: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("effective SNR means {0} and {1} coincide; partial-fraction mixture is singular")]
    DuplicateRate(f64, f64),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),

    #[error("series coefficient k_{n} disagrees between routes: {direct} vs {via_c}")]
    PathDisagreement { n: usize, direct: f64, via_c: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
