//! Shadow (left starting) vectors.
//!
//! Random columns come from ChaCha8 (`rand_chacha`, value-stable across
//! platforms and releases) turned into standard normals by Box–Muller, so a
//! seed reproduces the same block everywhere.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sparse::{DenseBlock, Scalar};

/// `N × n` block `[q_1, …, q_n]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowMatrix<S>(DenseBlock<S>);

impl<S: Scalar> ShadowMatrix<S> {
    pub fn new(block: DenseBlock<S>) -> Result<Self> {
        if block.ncols() == 0 {
            return Err(Error::InvalidConfig("shadow matrix needs at least one column".into()));
        }
        Ok(ShadowMatrix(block))
    }

    pub fn from_columns(columns: &[Vec<S>]) -> Result<Self> {
        Self::new(DenseBlock::from_columns(columns)?)
    }

    pub fn n(&self) -> usize {
        self.0.ncols()
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `q_{i+1}` (0-based column `i`).
    pub fn q(&self, i: usize) -> &[S] {
        self.0.col(i)
    }

    pub fn block(&self) -> &DenseBlock<S> {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowStrategy {
    /// `[r0, randn(N, n−1)]`
    ResidualGauss,
    /// `[r0, randn(N, n−1) + i·randn(N, n−1)]`; complex field only.
    ResidualGaussComplex,
    /// `sign(randn(N, n))` with the first column replaced by `r0`.
    SignGauss,
}

impl FromStr for ShadowStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "residual-gauss" => Ok(ShadowStrategy::ResidualGauss),
            "residual-gauss-complex" => Ok(ShadowStrategy::ResidualGaussComplex),
            "sign-gauss" => Ok(ShadowStrategy::SignGauss),
            other => Err(Error::InvalidConfig(format!("unknown shadow strategy {other:?}"))),
        }
    }
}

impl ShadowStrategy {
    pub fn name(self) -> &'static str {
        match self {
            ShadowStrategy::ResidualGauss => "residual-gauss",
            ShadowStrategy::ResidualGaussComplex => "residual-gauss-complex",
            ShadowStrategy::SignGauss => "sign-gauss",
        }
    }
}

struct Gaussian {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Gaussian {
    fn new(seed: u64) -> Self {
        Gaussian {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * PI * u2;
        self.spare = Some(radius * theta.sin());
        radius * theta.cos()
    }
}

/// Builds the shadow block. Column 1 is always `r0`; the remaining columns
/// are filled column by column from the seeded stream.
pub fn make_shadow_matrix<S: Scalar>(
    r0: &[S],
    n: usize,
    strategy: ShadowStrategy,
    seed: u64,
) -> Result<ShadowMatrix<S>> {
    if n < 1 {
        return Err(Error::InvalidConfig("n must be at least 1".into()));
    }
    if strategy == ShadowStrategy::ResidualGaussComplex && !S::IS_COMPLEX {
        return Err(Error::InvalidConfig(
            "residual-gauss-complex needs the complex field".into(),
        ));
    }
    let dim = r0.len();
    let mut block = DenseBlock::zeros(dim, n);
    block.col_mut(0).copy_from_slice(r0);
    let mut g = Gaussian::new(seed);
    for j in 1..n {
        for q in block.col_mut(j) {
            *q = match strategy {
                ShadowStrategy::ResidualGauss => S::from_real(g.sample()),
                ShadowStrategy::ResidualGaussComplex => {
                    let re = g.sample();
                    S::from_parts(re, g.sample()).expect("complex field")
                }
                ShadowStrategy::SignGauss => S::from_real(if g.sample() < 0.0 { -1.0 } else { 1.0 }),
            };
        }
    }
    ShadowMatrix::new(block)
}
