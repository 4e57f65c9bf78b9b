//! Iterative solvers and their shared bookkeeping.

mod bicgstab;
mod mlbicg;
mod mlbicgstabt;
mod omega;
mod shadow;

use std::fmt;

pub use bicgstab::bicgstab;
pub use mlbicg::{ml_n_bicg, ml_n_bicg_with_rule, ShadowRule};
pub use mlbicgstabt::{ml_n_bicgstabt, workspace_scalars};
pub use omega::{choose_omega, OmegaChoice};
pub use shadow::{make_shadow_matrix, ShadowMatrix, ShadowStrategy};

use crate::error::{Error, Result};
use crate::precond::Preconditioner;
use crate::sparse::{self, CsrMatrix, Scalar};

/// Parameters shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Block size: number of shadow vectors.
    pub n: usize,
    /// Relative residual tolerance on `‖r‖₂ / ‖b‖₂`.
    pub tol: f64,
    pub max_it: usize,
    /// ω-safeguard threshold in `[0, 1)`; 0 is plain minimization.
    pub kappa: f64,
    /// A denominator `c` with `|c| <= breakdown_eps` is a breakdown.
    pub breakdown_eps: f64,
    /// Seed for shadow-matrix generation.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 4,
            tol: 1e-7,
            max_it: 1000,
            kappa: 0.0,
            breakdown_eps: 0.0,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn with_n(self, n: usize) -> Self {
        SolverConfig { n, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_it < 1 {
            return Err(Error::InvalidConfig("max_it must be at least 1".into()));
        }
        if !(0.0..1.0).contains(&self.kappa) {
            return Err(Error::InvalidConfig(format!("kappa must lie in [0, 1), got {}", self.kappa)));
        }
        if !(self.breakdown_eps >= 0.0) {
            return Err(Error::InvalidConfig("breakdown_eps must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Termination status. `code()` gives the conventional 0 / 1 / −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flag {
    Converged,
    MaxIter,
    Breakdown,
}

impl Flag {
    pub fn code(self) -> i32 {
        match self {
            Flag::Converged => 0,
            Flag::MaxIter => 1,
            Flag::Breakdown => -1,
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Operation counts.
///
/// `matvecs` counts products of `A` with search directions (including the
/// initial direction). Evaluations of `b − A·x` (the starting residual and
/// the true residual at exit) go to `residual_evals`. Residual norms used by
/// the stopping test go to `norms`, not `dots`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub matvecs: usize,
    pub hermitian_matvecs: usize,
    pub precond_applies: usize,
    pub hermitian_precond_applies: usize,
    pub dots: usize,
    pub norms: usize,
    /// `y ← y + αx` style updates.
    pub saxpys: usize,
    /// `y ← αy`
    pub scalings: usize,
    pub residual_evals: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub flag: Flag,
    pub iter: usize,
    /// Final recursively computed relative residual.
    pub err: f64,
    /// `‖b − A x‖₂ / ‖b‖₂`, recomputed at exit.
    pub true_err: f64,
    /// Relative residual after each iteration; entry 0 is the start.
    pub residual_history: Vec<f64>,
    pub counters: OpCounts,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct Solution<S> {
    pub x: Vec<S>,
    pub report: SolverReport,
    /// ω of every completed minimization step, in order.
    pub omega_history: Vec<S>,
}

/// Counting wrappers around the kernels used inside a solve.
pub(crate) struct Ops<'a, S: Scalar> {
    pub a: &'a CsrMatrix<S>,
    pub m: &'a Preconditioner<S>,
    pub count: OpCounts,
}

impl<'a, S: Scalar> Ops<'a, S> {
    pub fn new(a: &'a CsrMatrix<S>, m: &'a Preconditioner<S>) -> Self {
        Ops {
            a,
            m,
            count: OpCounts::default(),
        }
    }

    pub fn matvec(&mut self, v: &[S], out: &mut [S]) {
        self.count.matvecs += 1;
        self.a.apply(v, out);
    }

    pub fn matvec_hermitian(&mut self, v: &[S], out: &mut [S]) {
        self.count.hermitian_matvecs += 1;
        self.a.apply_hermitian(v, out);
    }

    pub fn precond(&mut self, v: &mut [S]) {
        self.count.precond_applies += 1;
        self.m.apply_in_place(v);
    }

    pub fn precond_hermitian(&mut self, v: &mut [S]) {
        self.count.hermitian_precond_applies += 1;
        self.m.apply_hermitian_in_place(v);
    }

    /// `out ← b − A x`
    pub fn residual(&mut self, b: &[S], x: &[S], out: &mut [S]) {
        self.count.residual_evals += 1;
        self.a.apply(x, out);
        for (o, bi) in out.iter_mut().zip(b) {
            *o = *bi - *o;
        }
    }

    pub fn dot(&mut self, u: &[S], v: &[S]) -> S {
        self.count.dots += 1;
        sparse::dotc(u, v)
    }

    pub fn norm(&mut self, v: &[S]) -> f64 {
        self.count.norms += 1;
        sparse::norm2(v)
    }

    pub fn axpy(&mut self, alpha: S, x: &[S], y: &mut [S]) {
        self.count.saxpys += 1;
        sparse::axpy(alpha, x, y);
    }

    pub fn xpay(&mut self, x: &[S], alpha: S, y: &mut [S]) {
        self.count.saxpys += 1;
        sparse::xpay(x, alpha, y);
    }

    pub fn waxpy(&mut self, x: &[S], alpha: S, z: &[S], y: &mut [S]) {
        self.count.saxpys += 1;
        sparse::waxpy(x, alpha, z, y);
    }

    pub fn scal(&mut self, alpha: S, y: &mut [S]) {
        self.count.scalings += 1;
        sparse::scal(alpha, y);
    }
}

pub(crate) fn check_system<S: Scalar>(
    a: &CsrMatrix<S>,
    m: &Preconditioner<S>,
    b: &[S],
    x0: &[S],
) -> Result<()> {
    if !a.is_square() {
        return Err(Error::mismatch("system matrix (square)", a.nrows(), a.ncols()));
    }
    let n = a.nrows();
    if b.len() != n {
        return Err(Error::mismatch("right-hand side", n, b.len()));
    }
    if x0.len() != n {
        return Err(Error::mismatch("initial guess", n, x0.len()));
    }
    m.check_dim(n)
}

/// `‖b‖₂`, or 1 when `b = 0`.
pub(crate) fn rhs_norm<S: Scalar>(b: &[S]) -> f64 {
    let nb = sparse::norm2(b);
    if nb == 0.0 {
        1.0
    } else {
        nb
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        let ok = SolverConfig::default();
        assert!(ok.validate().is_ok());
        assert!(SolverConfig { n: 0, ..ok }.validate().is_err());
        assert!(SolverConfig { tol: 0.0, ..ok }.validate().is_err());
        assert!(SolverConfig { max_it: 0, ..ok }.validate().is_err());
        assert!(SolverConfig { kappa: 1.0, ..ok }.validate().is_err());
        assert!(SolverConfig { kappa: -0.1, ..ok }.validate().is_err());
        assert!(SolverConfig { breakdown_eps: -1.0, ..ok }.validate().is_err());
        assert!(SolverConfig { kappa: 0.7, ..ok }.validate().is_ok());
    }

    #[test]
    fn flag_codes() {
        assert_eq!(Flag::Converged.code(), 0);
        assert_eq!(Flag::MaxIter.code(), 1);
        assert_eq!(Flag::Breakdown.code(), -1);
    }
}
