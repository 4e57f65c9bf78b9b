//! Dense vector kernels and the column-block container.
//!
//! Vectors are plain slices. Inner products are conjugate-linear in the
//! first argument, so `dot_hermitian(q, r)` is `q^H r`.

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `u^H v`, checked.
pub fn dot_hermitian<S: Scalar>(u: &[S], v: &[S]) -> Result<S> {
    if u.len() != v.len() {
        return Err(Error::mismatch("dot_hermitian", u.len(), v.len()));
    }
    Ok(dotc(u, v))
}

/// Euclidean norm.
pub fn norm2<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|z| z.abs_sqr()).sum::<f64>().sqrt()
}

#[inline]
pub(crate) fn dotc<S: Scalar>(u: &[S], v: &[S]) -> S {
    debug_assert_eq!(u.len(), v.len());
    let mut acc = S::zero();
    for (a, b) in u.iter().zip(v) {
        acc += a.conj() * *b;
    }
    acc
}

/// `y += alpha * x`
#[inline]
pub(crate) fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * *xi;
    }
}

/// `y = x + alpha * y`
#[inline]
pub(crate) fn xpay<S: Scalar>(x: &[S], alpha: S, y: &mut [S]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi = *xi + alpha * *yi;
    }
}

/// `y = x + alpha * z`
#[inline]
pub(crate) fn waxpy<S: Scalar>(x: &[S], alpha: S, z: &[S], y: &mut [S]) {
    debug_assert_eq!(x.len(), y.len());
    debug_assert_eq!(z.len(), y.len());
    for ((yi, xi), zi) in y.iter_mut().zip(x).zip(z) {
        *yi = *xi + alpha * *zi;
    }
}

#[inline]
pub(crate) fn scal<S: Scalar>(alpha: S, y: &mut [S]) {
    for yi in y.iter_mut() {
        *yi *= alpha;
    }
}

/// An `nrows × ncols` block of column vectors stored contiguously,
/// column-major. Holds the shadow vectors and the `G`/`W`/`F` workspaces.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseBlock<S> {
    nrows: usize,
    ncols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseBlock<S> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        DenseBlock {
            nrows,
            ncols,
            data: vec![S::zero(); nrows * ncols],
        }
    }

    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        let nrows = columns.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * columns.len());
        for c in columns {
            if c.len() != nrows {
                return Err(Error::mismatch("DenseBlock::from_columns", nrows, c.len()));
            }
            data.extend_from_slice(c);
        }
        Ok(DenseBlock {
            nrows,
            ncols: columns.len(),
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn col(&self, j: usize) -> &[S] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [S] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    /// Mutable column `dst` together with a shared view of column `src`.
    pub fn col_pair_mut(&mut self, dst: usize, src: usize) -> (&mut [S], &[S]) {
        assert_ne!(dst, src, "col_pair_mut needs distinct columns");
        let n = self.nrows;
        if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * n);
            (&mut lo[dst * n..(dst + 1) * n], &hi[..n])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * n);
            (&mut hi[..n], &lo[src * n..(src + 1) * n])
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks_exact(self.nrows.max(1)).take(self.ncols)
    }

    /// Number of stored scalars.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }
}
