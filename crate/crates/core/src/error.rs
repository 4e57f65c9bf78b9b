use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid CSR structure: {0}")]
    InvalidStructure(String),

    #[error("{path}:{line}: {msg}")]
    MatrixMarket {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("ILU(0): zero pivot in row {row}")]
    ZeroPivot { row: usize },

    #[error("ILU(0): row {row} has no stored diagonal entry")]
    MissingDiagonal { row: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("omega selection: ||A u||_2 is zero")]
    ZeroDenominator,

    #[error("omega selection: omega vanished")]
    OmegaBreakdown,

    #[error("matrix is singular (pivot {0})")]
    SingularMatrix(usize),

    #[error("breakdown: {0}")]
    Breakdown(&'static str),
}

impl Error {
    pub(crate) fn mismatch(context: &'static str, expected: usize, found: usize) -> Self {
        Error::DimensionMismatch {
            context,
            expected,
            found,
        }
    }
}
