use super::scalar::{Complex64, Scalar};
use crate::error::{Error, Result};

/// Compressed sparse row matrix. Column indices are strictly increasing
/// within every row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<S> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<S>,
}

impl<S: Scalar> CsrMatrix<S> {
    /// Builds a matrix from raw CSR arrays, validating the structure.
    pub fn new(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<S>,
    ) -> Result<Self> {
        if row_ptr.len() != nrows + 1 {
            return Err(Error::mismatch("CsrMatrix row_ptr", nrows + 1, row_ptr.len()));
        }
        if col_idx.len() != values.len() {
            return Err(Error::mismatch("CsrMatrix values", col_idx.len(), values.len()));
        }
        if row_ptr[0] != 0 || row_ptr[nrows] != col_idx.len() {
            return Err(Error::InvalidStructure(format!(
                "row_ptr must run from 0 to nnz = {}",
                col_idx.len()
            )));
        }
        for i in 0..nrows {
            let (lo, hi) = (row_ptr[i], row_ptr[i + 1]);
            if lo > hi {
                return Err(Error::InvalidStructure(format!("row_ptr decreases at row {i}")));
            }
            let cols = &col_idx[lo..hi];
            if cols.iter().any(|&j| j >= ncols) {
                return Err(Error::InvalidStructure(format!("column index out of range in row {i}")));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidStructure(format!(
                    "column indices not strictly increasing in row {i}"
                )));
            }
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Assembles from 0-based `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, S)]) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(i, j, _) in triplets {
            if i >= nrows || j >= ncols {
                return Err(Error::InvalidStructure(format!(
                    "triplet ({i}, {j}) outside {nrows}x{ncols}"
                )));
            }
            counts[i + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![S::zero(); triplets.len()];
        for &(i, j, v) in triplets {
            cols[next[i]] = j;
            vals[next[i]] = v;
            next[i] += 1;
        }

        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut row: Vec<(usize, S)> = Vec::new();
        for i in 0..nrows {
            row.clear();
            row.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            row.sort_by_key(|&(j, _)| j);
            for &(j, v) in &row {
                match col_idx.last() {
                    Some(&last) if last == j && col_idx.len() > row_ptr[i] => {
                        *values.last_mut().unwrap() += v;
                    }
                    _ => {
                        col_idx.push(j);
                        values.push(v);
                    }
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![S::one(); n])
    }

    pub fn from_diagonal(d: &[S]) -> Self {
        let n = d.len();
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: d.to_vec(),
        }
    }

    /// Row-major dense `nrows × ncols` copy with explicit zeros.
    pub fn from_dense(nrows: usize, ncols: usize, dense: &[S]) -> Result<Self> {
        if dense.len() != nrows * ncols {
            return Err(Error::mismatch("CsrMatrix::from_dense", nrows * ncols, dense.len()));
        }
        let mut trip = Vec::new();
        for i in 0..nrows {
            for j in 0..ncols {
                let v = dense[i * ncols + j];
                if v != S::zero() {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(nrows, ncols, &trip)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [S] {
        &mut self.values
    }

    /// Column indices and values stored in row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[S]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Stored value at `(i, j)`, if `(i, j)` is in the pattern.
    pub fn get(&self, i: usize, j: usize) -> Option<S> {
        let (cols, vals) = self.row(i);
        cols.binary_search(&j).ok().map(|k| vals[k])
    }

    /// Iterates `(row, col, value)` over stored entries in row order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, S)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn to_dense(&self) -> Vec<S> {
        let mut d = vec![S::zero(); self.nrows * self.ncols];
        for (i, j, v) in self.triplets() {
            d[i * self.ncols + j] = v;
        }
        d
    }

    /// `A v`
    pub fn matvec(&self, v: &[S]) -> Result<Vec<S>> {
        let mut out = vec![S::zero(); self.nrows];
        self.matvec_into(v, &mut out)?;
        Ok(out)
    }

    pub fn matvec_into(&self, v: &[S], out: &mut [S]) -> Result<()> {
        if v.len() != self.ncols {
            return Err(Error::mismatch("matvec input", self.ncols, v.len()));
        }
        if out.len() != self.nrows {
            return Err(Error::mismatch("matvec output", self.nrows, out.len()));
        }
        self.apply(v, out);
        Ok(())
    }

    /// `A^H v`, without forming `A^H`.
    pub fn matvec_hermitian(&self, v: &[S]) -> Result<Vec<S>> {
        let mut out = vec![S::zero(); self.ncols];
        self.matvec_hermitian_into(v, &mut out)?;
        Ok(out)
    }

    pub fn matvec_hermitian_into(&self, v: &[S], out: &mut [S]) -> Result<()> {
        if v.len() != self.nrows {
            return Err(Error::mismatch("matvec_hermitian input", self.nrows, v.len()));
        }
        if out.len() != self.ncols {
            return Err(Error::mismatch("matvec_hermitian output", self.ncols, out.len()));
        }
        self.apply_hermitian(v, out);
        Ok(())
    }

    #[inline]
    pub(crate) fn apply(&self, v: &[S], out: &mut [S]) {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = S::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * v[self.col_idx[k]];
            }
            *o = acc;
        }
    }

    #[inline]
    pub(crate) fn apply_hermitian(&self, v: &[S], out: &mut [S]) {
        out.iter_mut().for_each(|o| *o = S::zero());
        for (i, &vi) in v.iter().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.col_idx[k]] += self.values[k].conj() * vi;
            }
        }
    }

    /// Position of the diagonal entry of each row, if stored.
    pub fn diagonal_positions(&self) -> Vec<Option<usize>> {
        (0..self.nrows)
            .map(|i| {
                let lo = self.row_ptr[i];
                self.row(i).0.binary_search(&i).ok().map(|k| lo + k)
            })
            .collect()
    }

    /// Same pattern, values mapped elementwise.
    pub fn map<T: Scalar>(&self, f: impl Fn(S) -> T) -> CsrMatrix<T> {
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl CsrMatrix<f64> {
    pub fn to_complex(&self) -> CsrMatrix<Complex64> {
        self.map(|v| Complex64::new(v, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_matvec<S: Scalar>(n: usize, m: usize, a: &[S], v: &[S]) -> Vec<S> {
        (0..n)
            .map(|i| (0..m).fold(S::zero(), |acc, j| acc + a[i * m + j] * v[j]))
            .collect()
    }

    #[test]
    fn identity_and_zero() {
        let i3 = CsrMatrix::<f64>::identity(3);
        assert_eq!(i3.matvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        let z = CsrMatrix::<f64>::from_triplets(3, 3, &[]).unwrap();
        assert_eq!(z.matvec(&[4.0, 5.0, 6.0]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn transpose_of_nilpotent_shift() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(a.matvec_hermitian(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn symmetric_matrix_hermitian_product_equals_product() {
        let a = CsrMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 2.0), (0, 2, -1.0), (2, 0, -1.0), (1, 1, 3.0), (2, 2, 1.5)],
        )
        .unwrap();
        let v = [0.3, -0.7, 1.1];
        assert_eq!(a.matvec(&v).unwrap(), a.matvec_hermitian(&v).unwrap());
    }

    #[test]
    fn random_matvec_matches_dense_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = gallery::random_sparse::<f64>(5, 5, 0.6, &mut rng);
        let v: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let want = dense_matvec(5, 5, &a.to_dense(), &v);
        let got = a.matvec(&v).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-14 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn hermitian_matvec_matches_dense_conjugate_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [6usize, 17, 50] {
            let a = gallery::random_sparse::<Complex64>(n, n, 0.4, &mut rng);
            let d = a.to_dense();
            let mut dh = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                for j in 0..n {
                    dh[j * n + i] = d[i * n + j].conj();
                }
            }
            let v: Vec<Complex64> = (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let want = dense_matvec(n, n, &dh, &v);
            let got = a.matvec_hermitian(&v).unwrap();
            let scale = crate::sparse::norm2(&want);
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).norm() <= 1e-14 * scale);
            }
        }
    }

    #[test]
    fn duplicates_are_summed() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 2.0), (0, 0, 3.0)]).unwrap();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(0, 0), Some(4.0));
    }

    #[test]
    fn rejects_bad_structure() {
        assert!(CsrMatrix::<f64>::new(2, 2, vec![0, 1, 2], vec![1, 0], vec![1.0, 1.0]).is_ok());
        assert!(CsrMatrix::<f64>::new(2, 2, vec![0, 2, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::<f64>::new(2, 2, vec![0, 1, 2], vec![1, 2], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::<f64>::new(2, 2, vec![0, 1], vec![1], vec![1.0]).is_err());
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let a = CsrMatrix::<f64>::identity(3);
        assert!(matches!(a.matvec(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(a.matvec_hermitian(&[1.0, 2.0]).is_err());
    }
}
