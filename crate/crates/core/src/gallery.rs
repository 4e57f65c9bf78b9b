//! Seeded random test matrices and vectors.

use rand::Rng;

use crate::sparse::{CsrMatrix, Scalar};

/// Uniform entry in `[-1, 1)` (both parts on the complex field).
pub fn random_scalar<S: Scalar, R: Rng + ?Sized>(rng: &mut R) -> S {
    let re = rng.gen_range(-1.0..1.0);
    if S::IS_COMPLEX {
        S::from_parts(re, rng.gen_range(-1.0..1.0)).unwrap()
    } else {
        S::from_real(re)
    }
}

pub fn random_vector<S: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<S> {
    (0..n).map(|_| random_scalar(rng)).collect()
}

/// Random sparse matrix; each position is stored with probability `density`.
pub fn random_sparse<S: Scalar>(
    nrows: usize,
    ncols: usize,
    density: f64,
    rng: &mut (impl Rng + ?Sized),
) -> CsrMatrix<S> {
    let mut trip = Vec::new();
    for i in 0..nrows {
        for j in 0..ncols {
            if rng.gen_bool(density) {
                trip.push((i, j, random_scalar(rng)));
            }
        }
    }
    CsrMatrix::from_triplets(nrows, ncols, &trip).expect("indices are in range")
}

/// Nonsymmetric, row diagonally dominant matrix: the off-diagonal pattern is
/// random with the given density and each diagonal entry is
/// `dominance · Σ|a_ij| + 1`.
pub fn random_diag_dominant<S: Scalar>(
    n: usize,
    density: f64,
    dominance: f64,
    rng: &mut (impl Rng + ?Sized),
) -> CsrMatrix<S> {
    let mut trip = Vec::new();
    for i in 0..n {
        let mut off = 0.0;
        for j in 0..n {
            if j != i && rng.gen_bool(density) {
                let v: S = random_scalar(rng);
                off += v.abs();
                trip.push((i, j, v));
            }
        }
        trip.push((i, i, S::from_real(dominance * off + 1.0)));
    }
    CsrMatrix::from_triplets(n, n, &trip).expect("indices are in range")
}

/// Random tridiagonal, row diagonally dominant matrix. ILU(0) of a
/// tridiagonal matrix drops no fill, so it is an exact LU.
pub fn random_tridiagonal<S: Scalar>(n: usize, dominance: f64, rng: &mut (impl Rng + ?Sized)) -> CsrMatrix<S> {
    let mut trip = Vec::with_capacity(3 * n);
    for i in 0..n {
        let mut off = 0.0;
        for j in [i.wrapping_sub(1), i + 1] {
            if j < n {
                let v: S = random_scalar(rng);
                off += v.abs();
                trip.push((i, j, v));
            }
        }
        trip.push((i, i, S::from_real(dominance * off + 1.0)));
    }
    CsrMatrix::from_triplets(n, n, &trip).expect("indices are in range")
}
