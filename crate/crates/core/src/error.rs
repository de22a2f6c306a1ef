use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid urn parameters N={n}, m={m}, c={c}: need 1 <= c <= m < N and c <= N - m")]
    InvalidUrn { n: u64, m: u64, c: u64 },
    #[error("invalid Bernoulli parameters c={c}, p={p}: need c >= 1 and 0 < p < 1")]
    InvalidBernoulli { c: u64, p: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
