use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unphysical Bell-diagonal state: lambda_{index} = {value} < 0")]
    Unphysical { index: &'static str, value: f64 },

    #[error("matrix is not Bell-diagonal: {0}")]
    NotBellDiagonal(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("closed form does not apply: {0}")]
    Precondition(String),

    #[error("invalid channel parameters: {0}")]
    InvalidChannel(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("no convergence in {routine} after {iterations} iterations")]
    Convergence {
        routine: &'static str,
        iterations: usize,
    },
}
