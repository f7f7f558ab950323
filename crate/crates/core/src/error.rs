use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix has {len} entries, expected {rows}x{cols}")]
    Shape { rows: usize, cols: usize, len: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |A[i][j] - conj(A[j][i])| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame is not orthonormal: max |F^dag F - I| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("Bloch vector length {length} exceeds 1/2")]
    BlochOutOfRange { length: f64 },

    #[error("Bell-diagonal parameters give negative eigenvalue {eigenvalue}")]
    InvalidBellDiagonal { eigenvalue: f64 },

    #[error("Werner parameter z = {0} is outside [0, 1]")]
    WernerOutOfRange(f64),

    #[error("closed-form axis solution undefined: {subexpression} = {value}")]
    OutsideSolutionDomain {
        subexpression: &'static str,
        value: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
