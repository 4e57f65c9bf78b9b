//! Preconditioned ML(n)BiCGStab with A-transpose.
//!
//! Right preconditioning: the method runs on `A M^{-1} y = b` and carries
//! `x = M^{-1} y`, so `r` is always the residual of the original system.
//! With [`Preconditioner::Identity`] this is the unpreconditioned method.
//!
//! The global index `k = j·n + i` (`1 ≤ i ≤ n`) is walked as an outer cycle
//! loop over `j` and an inner loop over `i`. Column `s` of `G`, `W` and `c`
//! holds the direction whose index is `s` modulo `n`; each column is
//! overwritten once per cycle, after its old value was last read.
//!
//! Workspace: `x, r, ĝ, z` plus `G, W` (`N × n`) and `F = M^{-H} A^H
//! [q_1..q_{n-1}]` (`N × (n−1)`). `z` doubles as `A û` in the minimization
//! step and as the projected residual `z_w` in the direction sweeps; `u`
//! lives in `r`.

use std::time::Instant;

use super::omega::safeguarded_omega;
use super::{check_system, rhs_norm, Flag, Ops, ShadowMatrix, Solution, SolverConfig, SolverReport};
use crate::error::{Error, Result};
use crate::precond::Preconditioner;
use crate::sparse::{CsrMatrix, DenseBlock, Scalar};

/// Scalars allocated by [`ml_n_bicgstabt`] for vectors of length `dim`
/// and block size `n`, excluding the O(n) coefficient arrays. Adding the
/// caller's `Q` and `b` gives `(4n + 4)·dim`.
pub fn workspace_scalars(dim: usize, n: usize) -> usize {
    (3 * n + 3) * dim
}

struct Run<'a, S: Scalar> {
    ops: Ops<'a, S>,
    b: &'a [S],
    bnrm2: f64,
    x: Vec<S>,
    history: Vec<f64>,
    omegas: Vec<S>,
    iter: usize,
    start: Instant,
}

impl<'a, S: Scalar> Run<'a, S> {
    fn record(&mut self, rnorm: f64) -> f64 {
        let err = rnorm / self.bnrm2;
        self.history.push(err);
        err
    }

    fn finish(mut self, flag: Flag, scratch: &mut [S]) -> Solution<S> {
        self.ops.residual(self.b, &self.x, scratch);
        let true_err = crate::sparse::norm2(scratch) / self.bnrm2;
        let err = *self.history.last().expect("history starts with r0");
        Solution {
            x: self.x,
            report: SolverReport {
                flag,
                iter: self.iter,
                err,
                true_err,
                residual_history: self.history,
                counters: self.ops.count,
                elapsed_seconds: self.start.elapsed().as_secs_f64(),
            },
            omega_history: self.omegas,
        }
    }
}

/// Solves `A x = b` from `x0` with shadow vectors `q`.
///
/// The block size is `q.n()`; it must agree with `cfg.n`. Breakdown
/// (`|c| <= cfg.breakdown_eps`, `A û = 0`, or ω = 0) and budget exhaustion
/// are reported through the returned flag; `Err` is reserved for invalid
/// input.
pub fn ml_n_bicgstabt<S: Scalar>(
    a: &CsrMatrix<S>,
    m: &Preconditioner<S>,
    b: &[S],
    x0: &[S],
    q: &ShadowMatrix<S>,
    cfg: &SolverConfig,
) -> Result<Solution<S>> {
    cfg.validate()?;
    check_system(a, m, b, x0)?;
    let dim = a.nrows();
    let n = cfg.n;
    if q.n() != n {
        return Err(Error::mismatch("shadow matrix columns", n, q.n()));
    }
    if q.dim() != dim {
        return Err(Error::mismatch("shadow matrix rows", dim, q.dim()));
    }
    let eps = cfg.breakdown_eps;
    let small = |c: S| c.abs() <= eps;

    let start = Instant::now();
    let mut run = Run {
        ops: Ops::new(a, m),
        b,
        bnrm2: rhs_norm(b),
        x: x0.to_vec(),
        history: Vec::new(),
        omegas: Vec::new(),
        iter: 0,
        start,
    };
    let mut r = vec![S::zero(); dim];
    let mut z = vec![S::zero(); dim];
    run.ops.residual(b, x0, &mut r);
    let rn = run.ops.norm(&r);
    if run.record(rn) < cfg.tol {
        return Ok(run.finish(Flag::Converged, &mut z));
    }

    let mut gh = vec![S::zero(); dim];
    let mut g = DenseBlock::zeros(dim, n);
    let mut w = DenseBlock::zeros(dim, n);
    let mut f = DenseBlock::zeros(dim, n - 1);
    let mut c = vec![S::zero(); n];

    for s in 0..n - 1 {
        let fs = f.col_mut(s);
        run.ops.matvec_hermitian(q.q(s), fs);
        run.ops.precond_hermitian(fs);
    }

    g.col_mut(0).copy_from_slice(&r);
    gh.copy_from_slice(&r);
    run.ops.precond(&mut gh);
    run.ops.matvec(&gh, w.col_mut(0));
    c[0] = run.ops.dot(q.q(0), w.col(0));
    if small(c[0]) {
        return Ok(run.finish(Flag::Breakdown, &mut z));
    }
    let mut e = run.ops.dot(q.q(0), &r);
    let mut omega = S::one();

    for cycle in 0usize.. {
        for i in 1..n {
            let alpha = e / c[i - 1];
            run.ops.axpy(alpha, &gh, &mut run.x);
            run.ops.axpy(-alpha, w.col(i - 1), &mut r);
            let rn = run.ops.norm(&r);
            let err = run.record(rn);
            run.iter += 1;
            if err < cfg.tol {
                return Ok(run.finish(Flag::Converged, &mut z));
            }
            if !err.is_finite() {
                return Ok(run.finish(Flag::Breakdown, &mut z));
            }
            if run.iter >= cfg.max_it {
                return Ok(run.finish(Flag::MaxIter, &mut z));
            }

            e = run.ops.dot(q.q(i), &r);
            if cycle >= 1 {
                // Project r against the previous cycle's tail i..n-1, then
                // against this cycle's directions 0..i-1 through F.
                let beta = -e / c[i];
                run.ops.waxpy(&r, beta, w.col(i), &mut z);
                run.ops.scal(beta, g.col_mut(i));
                for s in i + 1..n {
                    let beta = -run.ops.dot(q.q(s), &z) / c[s];
                    run.ops.axpy(beta, w.col(s), &mut z);
                    let (gi, gs) = g.col_pair_mut(i, s);
                    run.ops.axpy(beta, gs, gi);
                }
                run.ops.xpay(&z, -S::one() / omega, g.col_mut(i));
                for s in 0..i {
                    let beta = -run.ops.dot(f.col(s), g.col(i)) / c[s];
                    let (gi, gs) = g.col_pair_mut(i, s);
                    run.ops.axpy(beta, gs, gi);
                }
            } else {
                let beta = -run.ops.dot(f.col(0), &r) / c[0];
                {
                    let (gi, g0) = g.col_pair_mut(i, 0);
                    run.ops.waxpy(&r, beta, g0, gi);
                }
                for s in 1..i {
                    let beta = -run.ops.dot(f.col(s), g.col(i)) / c[s];
                    let (gi, gs) = g.col_pair_mut(i, s);
                    run.ops.axpy(beta, gs, gi);
                }
            }
            gh.copy_from_slice(g.col(i));
            run.ops.precond(&mut gh);
            run.ops.matvec(&gh, w.col_mut(i));
            c[i] = run.ops.dot(q.q(i), w.col(i));
            if small(c[i]) {
                return Ok(run.finish(Flag::Breakdown, &mut z));
            }
        }

        // Minimization step: r holds u after the α update.
        let alpha = e / c[n - 1];
        run.ops.axpy(alpha, &gh, &mut run.x);
        run.ops.axpy(-alpha, w.col(n - 1), &mut r);
        let unorm = run.ops.norm(&r);
        if unorm / run.bnrm2 < cfg.tol {
            run.record(unorm);
            run.iter += 1;
            return Ok(run.finish(Flag::Converged, &mut z));
        }
        gh.copy_from_slice(&r);
        run.ops.precond(&mut gh);
        run.ops.matvec(&gh, &mut z);
        let zz = run.ops.dot(&z, &z).re();
        let zu = run.ops.dot(&z, &r);
        omega = match safeguarded_omega(zz, zu, unorm, cfg.kappa) {
            Ok(choice) => choice.omega,
            Err(_) => return Ok(run.finish(Flag::Breakdown, &mut z)),
        };
        run.omegas.push(omega);
        run.ops.axpy(omega, &gh, &mut run.x);
        run.ops.axpy(-omega, &z, &mut r);
        let rn = run.ops.norm(&r);
        let err = run.record(rn);
        run.iter += 1;
        if err < cfg.tol {
            return Ok(run.finish(Flag::Converged, &mut z));
        }
        if !err.is_finite() {
            return Ok(run.finish(Flag::Breakdown, &mut z));
        }

        // First direction of the next cycle, projected against this cycle.
        e = run.ops.dot(q.q(0), &r);
        let beta = -e / c[0];
        run.ops.waxpy(&r, beta, w.col(0), &mut z);
        run.ops.scal(beta, g.col_mut(0));
        for s in 1..n {
            let beta = -run.ops.dot(q.q(s), &z) / c[s];
            run.ops.axpy(beta, w.col(s), &mut z);
            let (g0, gs) = g.col_pair_mut(0, s);
            run.ops.axpy(beta, gs, g0);
        }
        run.ops.xpay(&z, -S::one() / omega, g.col_mut(0));
        gh.copy_from_slice(g.col(0));
        run.ops.precond(&mut gh);
        run.ops.matvec(&gh, w.col_mut(0));
        c[0] = run.ops.dot(q.q(0), w.col(0));
        // The budget test follows the direction update so that a run capped
        // at m·n iterations performs exactly m complete cycles.
        if run.iter >= cfg.max_it {
            return Ok(run.finish(Flag::MaxIter, &mut z));
        }
        if small(c[0]) {
            return Ok(run.finish(Flag::Breakdown, &mut z));
        }
    }
    unreachable!("cycle loop only exits by returning")
}
