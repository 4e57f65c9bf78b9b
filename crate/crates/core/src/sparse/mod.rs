//! Scalars, dense vectors, CSR matrices and Matrix Market I/O.

mod csr;
mod mm;
mod scalar;
mod vector;

pub use csr::CsrMatrix;
pub use mm::{
    read_matrix_market, read_matrix_market_as, read_matrix_market_vector, write_matrix_market,
    write_matrix_market_vector, Field, MatrixMarketMatrix, MatrixMarketVector,
};
pub use scalar::{Complex64, Scalar};
pub use vector::{dot_hermitian, norm2, DenseBlock};

pub(crate) use vector::{axpy, dotc, scal, waxpy, xpay};
