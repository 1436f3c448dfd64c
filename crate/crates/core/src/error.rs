use thiserror::Error;

/// Errors surfaced by the numerical kernel and the measures built on it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace is {0}, expected 1 within tolerance")]
    BadTrace(f64),
    #[error("state vector norm is {0}, expected 1 within tolerance")]
    BadNorm(f64),
    #[error("invalid argument: {0}")]
    InvalidArg(String),
    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("malformed state data: {0}")]
    BadStateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
