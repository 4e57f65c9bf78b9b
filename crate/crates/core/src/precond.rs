//! ILU(0) preconditioning.
//!
//! `L` (unit lower, diagonal implicit) and `U` (upper, with diagonal) share
//! one CSR array on exactly the pattern of `A`. Solves run in place on the
//! caller's buffer and never allocate.

use crate::error::{Error, Result};
use crate::sparse::{CsrMatrix, Scalar};

/// Zero-fill incomplete LU factors of a square matrix.
#[derive(Debug, Clone)]
pub struct Ilu0Factors<S> {
    combined: CsrMatrix<S>,
    diag_ptr: Vec<usize>,
}

impl<S: Scalar> Ilu0Factors<S> {
    /// IKJ-ordered incomplete LU restricted to the pattern of `a`.
    pub fn factorize(a: &CsrMatrix<S>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::mismatch("ilu0 (square matrix)", a.nrows(), a.ncols()));
        }
        let n = a.nrows();
        let diag_ptr = a
            .diagonal_positions()
            .into_iter()
            .enumerate()
            .map(|(row, p)| p.ok_or(Error::MissingDiagonal { row }))
            .collect::<Result<Vec<_>>>()?;

        let mut lu = a.clone();
        let row_ptr = a.row_ptr().to_vec();
        let col_idx = a.col_idx().to_vec();
        let vals = lu.values_mut();
        const UNSET: usize = usize::MAX;
        let mut pos = vec![UNSET; n];

        for i in 0..n {
            for k in row_ptr[i]..row_ptr[i + 1] {
                pos[col_idx[k]] = k;
            }
            for kk in row_ptr[i]..diag_ptr[i] {
                let k = col_idx[kk];
                let lik = vals[kk] / vals[diag_ptr[k]];
                vals[kk] = lik;
                for jj in diag_ptr[k] + 1..row_ptr[k + 1] {
                    let p = pos[col_idx[jj]];
                    if p != UNSET {
                        let ukj = vals[jj];
                        vals[p] -= lik * ukj;
                    }
                }
            }
            if vals[diag_ptr[i]] == S::zero() {
                return Err(Error::ZeroPivot { row: i });
            }
            for k in row_ptr[i]..row_ptr[i + 1] {
                pos[col_idx[k]] = UNSET;
            }
        }
        Ok(Ilu0Factors {
            combined: lu,
            diag_ptr,
        })
    }

    pub fn dim(&self) -> usize {
        self.combined.nrows()
    }

    /// The interleaved `L\U` storage.
    pub fn combined(&self) -> &CsrMatrix<S> {
        &self.combined
    }

    pub fn diag_ptr(&self) -> &[usize] {
        &self.diag_ptr
    }

    /// `v ← U^{-1} L^{-1} v`
    pub fn solve_in_place(&self, v: &mut [S]) {
        let (rp, ci, val) = (self.combined.row_ptr(), self.combined.col_idx(), self.combined.values());
        let n = self.dim();
        for i in 0..n {
            let mut acc = v[i];
            for k in rp[i]..self.diag_ptr[i] {
                acc -= val[k] * v[ci[k]];
            }
            v[i] = acc;
        }
        for i in (0..n).rev() {
            let d = self.diag_ptr[i];
            let mut acc = v[i];
            for k in d + 1..rp[i + 1] {
                acc -= val[k] * v[ci[k]];
            }
            v[i] = acc / val[d];
        }
    }

    /// `v ← L^{-H} U^{-H} v`, i.e. `M^{-H} v` with `M = LU`.
    ///
    /// Both transposed solves sweep the rows of the stored factors and
    /// scatter into later (resp. earlier) unknowns.
    pub fn solve_hermitian_in_place(&self, v: &mut [S]) {
        let (rp, ci, val) = (self.combined.row_ptr(), self.combined.col_idx(), self.combined.values());
        let n = self.dim();
        // U^H is lower triangular.
        for i in 0..n {
            let d = self.diag_ptr[i];
            let yi = v[i] / val[d].conj();
            v[i] = yi;
            for k in d + 1..rp[i + 1] {
                v[ci[k]] -= val[k].conj() * yi;
            }
        }
        // L^H is unit upper triangular.
        for i in (0..n).rev() {
            let zi = v[i];
            for k in rp[i]..self.diag_ptr[i] {
                v[ci[k]] -= val[k].conj() * zi;
            }
        }
    }

    /// Dense row-major `L` (unit diagonal) and `U`.
    pub fn dense_factors(&self) -> (Vec<S>, Vec<S>) {
        let n = self.dim();
        let mut l = vec![S::zero(); n * n];
        let mut u = vec![S::zero(); n * n];
        for i in 0..n {
            l[i * n + i] = S::one();
        }
        for (i, j, v) in self.combined.triplets() {
            if j < i {
                l[i * n + j] = v;
            } else {
                u[i * n + j] = v;
            }
        }
        (l, u)
    }
}

/// The operator `M` of a right-preconditioned solve.
#[derive(Debug, Clone, Default)]
pub enum Preconditioner<S> {
    #[default]
    Identity,
    Ilu0(Ilu0Factors<S>),
}

impl<S: Scalar> Preconditioner<S> {
    pub fn ilu0(a: &CsrMatrix<S>) -> Result<Self> {
        Ilu0Factors::factorize(a).map(Preconditioner::Ilu0)
    }

    /// `M^{-1} v`
    pub fn apply_m_inverse(&self, v: &[S]) -> Vec<S> {
        let mut out = v.to_vec();
        self.apply_in_place(&mut out);
        out
    }

    /// `M^{-H} v`
    pub fn apply_m_inv_hermitian(&self, v: &[S]) -> Vec<S> {
        let mut out = v.to_vec();
        self.apply_hermitian_in_place(&mut out);
        out
    }

    pub fn apply_in_place(&self, v: &mut [S]) {
        match self {
            Preconditioner::Identity => {}
            Preconditioner::Ilu0(f) => f.solve_in_place(v),
        }
    }

    pub fn apply_hermitian_in_place(&self, v: &mut [S]) {
        match self {
            Preconditioner::Identity => {}
            Preconditioner::Ilu0(f) => f.solve_hermitian_in_place(v),
        }
    }

    /// Checks the factor dimension against a system of size `n`.
    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            Preconditioner::Identity => Ok(()),
            Preconditioner::Ilu0(f) if f.dim() == n => Ok(()),
            Preconditioner::Ilu0(f) => Err(Error::mismatch("preconditioner", n, f.dim())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::oracles::{dense_lu_nopivot, DenseMatrix};
    use crate::sparse::{dot_hermitian, norm2, Complex64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn matmul<S: Scalar>(n: usize, a: &[S], b: &[S]) -> Vec<S> {
        let mut c = vec![S::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    c[i * n + j] += a[i * n + k] * b[k * n + j];
                }
            }
        }
        c
    }

    #[test]
    fn diagonal_matrix_factors_trivially() {
        let a = CsrMatrix::from_diagonal(&[2.0, 3.0, 4.0]);
        let f = Ilu0Factors::factorize(&a).unwrap();
        let (l, u) = f.dense_factors();
        assert_eq!(l, CsrMatrix::<f64>::identity(3).to_dense());
        assert_eq!(u, a.to_dense());
    }

    #[test]
    fn unit_lower_triangular_gives_identity_u() {
        let a = CsrMatrix::from_triplets(
            3,
            3,
            &[(0, 0, 1.0), (1, 0, 0.5), (1, 1, 1.0), (2, 0, -2.0), (2, 1, 3.0), (2, 2, 1.0)],
        )
        .unwrap();
        let (l, u) = Ilu0Factors::factorize(&a).unwrap().dense_factors();
        assert_eq!(l, a.to_dense());
        assert_eq!(u, CsrMatrix::<f64>::identity(3).to_dense());
    }

    #[test]
    fn dense_pattern_equals_unpivoted_lu() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = gallery::random_diag_dominant::<f64>(4, 1.0, 1.5, &mut rng);
        assert_eq!(a.nnz(), 16);
        let (l, u) = Ilu0Factors::factorize(&a).unwrap().dense_factors();
        let (lr, ur) = dense_lu_nopivot(&DenseMatrix::from_csr(&a)).unwrap();
        for (x, y) in l.iter().zip(lr.data()).chain(u.iter().zip(ur.data())) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn lu_matches_a_on_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = gallery::random_diag_dominant::<Complex64>(30, 0.15, 1.2, &mut rng);
        let (l, u) = Ilu0Factors::factorize(&a).unwrap().dense_factors();
        let lu = matmul(30, &l, &u);
        for (i, j, v) in a.triplets() {
            assert!((lu[i * 30 + j] - v).norm() <= 1e-12 * v.norm().max(1.0));
        }
    }

    #[test]
    fn errors() {
        let missing = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        assert!(matches!(
            Ilu0Factors::factorize(&missing),
            Err(Error::MissingDiagonal { row: 1 })
        ));
        // [[1, 1], [1, 1]] eliminates to a zero U_22.
        let singular = CsrMatrix::from_dense(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            Ilu0Factors::factorize(&singular),
            Err(Error::ZeroPivot { row: 1 })
        ));
        let zero_first = CsrMatrix::from_triplets(2, 2, &[(0, 0, 0.0), (1, 1, 1.0)]).unwrap();
        assert!(matches!(
            Ilu0Factors::factorize(&zero_first),
            Err(Error::ZeroPivot { row: 0 })
        ));
    }

    #[test]
    fn identity_and_diagonal_solves() {
        let p = Preconditioner::<f64>::Identity;
        assert_eq!(p.apply_m_inverse(&[1.0, -2.0]), vec![1.0, -2.0]);
        assert_eq!(p.apply_m_inv_hermitian(&[1.0, -2.0]), vec![1.0, -2.0]);
        let p = Preconditioner::ilu0(&CsrMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert_eq!(p.apply_m_inverse(&[2.0, 4.0]), vec![1.0, 1.0]);
        assert_eq!(p.apply_m_inv_hermitian(&[2.0, 4.0]), vec![1.0, 1.0]);
    }

    #[test]
    fn solves_match_dense_triangular_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 5;
        let a = gallery::random_diag_dominant::<Complex64>(n, 1.0, 1.3, &mut rng);
        let p = Preconditioner::ilu0(&a).unwrap();
        let Preconditioner::Ilu0(f) = &p else { unreachable!() };
        let (l, u) = f.dense_factors();
        let m = DenseMatrix::new(n, matmul(n, &l, &u)).unwrap();
        let v = gallery::random_vector::<Complex64, _>(n, &mut rng);

        let x = p.apply_m_inverse(&v);
        let want = crate::oracles::dense_direct_solve(&m, &v).unwrap();
        for (a, b) in x.iter().zip(&want) {
            assert!((a - b).norm() <= 1e-12 * norm2(&want));
        }

        let xh = p.apply_m_inv_hermitian(&v);
        let want_h = crate::oracles::dense_direct_solve(&m.conj_transpose(), &v).unwrap();
        for (a, b) in xh.iter().zip(&want_h) {
            assert!((a - b).norm() <= 1e-12 * norm2(&want_h));
        }
    }

    #[test]
    fn adjoint_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = gallery::random_diag_dominant::<Complex64>(40, 0.1, 1.1, &mut rng);
        let p = Preconditioner::ilu0(&a).unwrap();
        for _ in 0..10 {
            let u = gallery::random_vector::<Complex64, _>(40, &mut rng);
            let v = gallery::random_vector::<Complex64, _>(40, &mut rng);
            let lhs = dot_hermitian(&p.apply_m_inv_hermitian(&u), &v).unwrap();
            let rhs = dot_hermitian(&u, &p.apply_m_inverse(&v)).unwrap();
            assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn preconditioned_operator_is_near_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = gallery::random_tridiagonal::<f64>(100, 1.5, &mut rng);
        let p = Preconditioner::ilu0(&a).unwrap();
        let v = gallery::random_vector::<f64, _>(100, &mut rng);
        let back = p.apply_m_inverse(&a.matvec(&v).unwrap());
        let diff: Vec<f64> = back.iter().zip(&v).map(|(x, y)| x - y).collect();
        assert!(norm2(&diff) <= 1e-6 * norm2(&v), "{}", norm2(&diff) / norm2(&v));
    }
}
