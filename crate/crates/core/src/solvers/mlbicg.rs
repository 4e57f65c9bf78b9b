//! ML(n)BiCG, the unstabilized recurrence.
//!
//! Shadow vectors `p_k = (A^H)^{g_n(k)} q_{r_n(k)}` are generated on the fly:
//! `p_{k+1} = A^H p_{k+1−n}` once the first `n` have been used. Repeated
//! multiplication by `A^H` is sensitive to rounding, so this is a reference
//! path for short runs rather than a production solver.

use std::collections::VecDeque;
use std::time::Instant;

use super::{check_system, rhs_norm, Flag, Ops, ShadowMatrix, Solution, SolverConfig, SolverReport};
use crate::error::{Error, Result};
use crate::precond::Preconditioner;
use crate::sparse::{norm2, CsrMatrix, Scalar};

/// Source of `q_1, …, q_n`.
#[derive(Debug, Clone, Copy)]
pub enum ShadowRule<'a, S> {
    /// Columns of a precomputed block.
    Fixed(&'a ShadowMatrix<S>),
    /// `q_k = r̂_{k−1}`.
    Residual,
    /// `q_k = A r̂_{k−1}`.
    AResidual,
}

struct Dir<S> {
    g: Vec<S>,
    ag: Vec<S>,
    /// `p_{s+1}`
    p: Vec<S>,
    /// `p_{s+1}^H A ĝ_s`
    d: S,
}

pub fn ml_n_bicg<S: Scalar>(
    a: &CsrMatrix<S>,
    b: &[S],
    x0: &[S],
    q: &ShadowMatrix<S>,
    cfg: &SolverConfig,
) -> Result<Solution<S>> {
    ml_n_bicg_with_rule(a, b, x0, ShadowRule::Fixed(q), cfg)
}

pub fn ml_n_bicg_with_rule<S: Scalar>(
    a: &CsrMatrix<S>,
    b: &[S],
    x0: &[S],
    rule: ShadowRule<'_, S>,
    cfg: &SolverConfig,
) -> Result<Solution<S>> {
    cfg.validate()?;
    let identity = Preconditioner::Identity;
    check_system(a, &identity, b, x0)?;
    let dim = a.nrows();
    let n = cfg.n;
    if let ShadowRule::Fixed(q) = rule {
        if q.n() != n {
            return Err(Error::mismatch("shadow matrix columns", n, q.n()));
        }
        if q.dim() != dim {
            return Err(Error::mismatch("shadow matrix rows", dim, q.dim()));
        }
    }

    let start = Instant::now();
    let mut ops = Ops::new(a, &identity);
    let bnrm2 = rhs_norm(b);
    let mut x = x0.to_vec();
    let mut r = vec![S::zero(); dim];
    ops.residual(b, x0, &mut r);
    let mut history = vec![ops.norm(&r) / bnrm2];
    let mut iter = 0;

    // q_{k+1} for k + 1 <= n, given r̂_k.
    let fresh_q = |ops: &mut Ops<'_, S>, k: usize, r: &[S]| -> Vec<S> {
        match rule {
            ShadowRule::Fixed(q) => q.q(k).to_vec(),
            ShadowRule::Residual => r.to_vec(),
            ShadowRule::AResidual => {
                let mut out = vec![S::zero(); r.len()];
                ops.matvec(r, &mut out);
                out
            }
        }
    };

    let flag = 'run: {
        if history[0] < cfg.tol {
            break 'run Flag::Converged;
        }
        let mut window: VecDeque<Dir<S>> = VecDeque::with_capacity(n + 1);
        let p1 = fresh_q(&mut ops, 0, &r);
        let mut ag = vec![S::zero(); dim];
        ops.matvec(&r, &mut ag);
        let d = ops.dot(&p1, &ag);
        window.push_back(Dir { g: r.clone(), ag, p: p1, d });

        let mut y = vec![S::zero(); dim];
        for k in 1usize.. {
            let last = window.back().expect("window is never empty");
            if last.d.abs() <= cfg.breakdown_eps {
                break 'run Flag::Breakdown;
            }
            let alpha = ops.dot(&last.p, &r) / last.d;
            ops.axpy(alpha, &last.g, &mut x);
            ops.axpy(-alpha, &last.ag, &mut r);
            let err = ops.norm(&r) / bnrm2;
            history.push(err);
            iter = k;
            if err < cfg.tol {
                break 'run Flag::Converged;
            }
            if !err.is_finite() {
                break 'run Flag::Breakdown;
            }
            if iter >= cfg.max_it {
                break 'run Flag::MaxIter;
            }

            // y tracks A(r̂_k + Σ_{t<s} β_t ĝ_t) through the sweep.
            ops.matvec(&r, &mut y);
            let mut g = r.clone();
            for dir in window.iter() {
                if dir.d.abs() <= cfg.breakdown_eps {
                    break 'run Flag::Breakdown;
                }
                let beta = -ops.dot(&dir.p, &y) / dir.d;
                ops.axpy(beta, &dir.ag, &mut y);
                ops.axpy(beta, &dir.g, &mut g);
            }
            let mut ag = vec![S::zero(); dim];
            ops.matvec(&g, &mut ag);

            let p = if k < n {
                fresh_q(&mut ops, k, &r)
            } else {
                let oldest = &window.front().expect("window is never empty").p;
                let mut p = vec![S::zero(); dim];
                ops.matvec_hermitian(oldest, &mut p);
                p
            };
            let d = ops.dot(&p, &ag);
            window.push_back(Dir { g, ag, p, d });
            if window.len() > n {
                window.pop_front();
            }
        }
        unreachable!()
    };

    let mut scratch = vec![S::zero(); dim];
    ops.residual(b, &x, &mut scratch);
    let true_err = norm2(&scratch) / bnrm2;
    Ok(Solution {
        x,
        report: SolverReport {
            flag,
            iter,
            err: *history.last().expect("nonempty"),
            true_err,
            residual_history: history,
            counters: ops.count,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        },
        omega_history: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::solvers::{make_shadow_matrix, ShadowStrategy};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_converges_at_first_step() {
        let a = CsrMatrix::<f64>::identity(6);
        let b = vec![1.0, 2.0, 3.0, -1.0, 0.5, 2.5];
        for n in [1, 3] {
            let q = make_shadow_matrix(&b, n, ShadowStrategy::ResidualGauss, 1).unwrap();
            let sol = ml_n_bicg(&a, &b, &[0.0; 6], &q, &SolverConfig::default().with_n(n)).unwrap();
            assert_eq!(sol.report.flag, Flag::Converged);
            assert_eq!(sol.report.iter, 1);
            assert_eq!(sol.x, b);
        }
    }

    #[test]
    fn small_system_solves() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = gallery::random_diag_dominant::<f64>(20, 0.3, 1.5, &mut rng);
        let b = gallery::random_vector::<f64, _>(20, &mut rng);
        // Powers of A^H drift for n = 1, which stalls well above 1e-10.
        for (n, tol) in [(1, 1e-4), (2, 1e-10), (4, 1e-10)] {
            let q = make_shadow_matrix(&b, n, ShadowStrategy::ResidualGauss, 5).unwrap();
            let cfg = SolverConfig { tol, ..SolverConfig::default() }.with_n(n);
            let sol = ml_n_bicg(&a, &b, &[0.0; 20], &q, &cfg).unwrap();
            assert_eq!(sol.report.flag, Flag::Converged, "n = {n}");
            assert!(sol.report.true_err < 100.0 * tol);
        }
    }

    #[test]
    fn residual_rule_needs_no_block() {
        let a = CsrMatrix::from_diagonal(&[1.0, 2.0]);
        let cfg = SolverConfig { tol: 1e-12, ..SolverConfig::default() }.with_n(2);
        for rule in [ShadowRule::Residual, ShadowRule::AResidual] {
            let sol = ml_n_bicg_with_rule(&a, &[1.0, 1.0], &[0.0, 0.0], rule, &cfg).unwrap();
            assert_eq!(sol.report.flag, Flag::Converged);
            assert!(sol.report.iter <= 2);
        }
    }

    #[test]
    fn mismatched_block_is_rejected() {
        let a = CsrMatrix::<f64>::identity(3);
        let q = make_shadow_matrix(&[1.0; 3], 2, ShadowStrategy::ResidualGauss, 0).unwrap();
        assert!(ml_n_bicg(&a, &[1.0; 3], &[0.0; 3], &q, &SolverConfig::default().with_n(3)).is_err());
    }
}
