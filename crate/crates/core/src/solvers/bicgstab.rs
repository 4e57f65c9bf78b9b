//! Right-preconditioned BiCGStab with shadow vector `r̃ = r_0`.
//!
//! The history records `‖s‖` only when it meets the tolerance, then `‖r‖`
//! after every ω step, the same bookkeeping as ML(1)BiCGStabt.

use std::time::Instant;

use super::omega::safeguarded_omega;
use super::{check_system, rhs_norm, Flag, Ops, Solution, SolverConfig, SolverReport};
use crate::error::Result;
use crate::precond::Preconditioner;
use crate::sparse::{norm2, CsrMatrix, Scalar};

pub fn bicgstab<S: Scalar>(
    a: &CsrMatrix<S>,
    m: &Preconditioner<S>,
    b: &[S],
    x0: &[S],
    cfg: &SolverConfig,
) -> Result<Solution<S>> {
    cfg.validate()?;
    check_system(a, m, b, x0)?;
    let dim = a.nrows();
    let eps = cfg.breakdown_eps;
    let start = Instant::now();
    let mut ops = Ops::new(a, m);
    let bnrm2 = rhs_norm(b);
    let mut x = x0.to_vec();
    let mut r = vec![S::zero(); dim];
    ops.residual(b, x0, &mut r);
    let mut history = vec![ops.norm(&r) / bnrm2];
    let mut omegas = Vec::new();
    let mut iter = 0;

    let flag = 'run: {
        if history[0] < cfg.tol {
            break 'run Flag::Converged;
        }
        let rt = r.clone();
        let mut p = r.clone();
        let mut ph = vec![S::zero(); dim];
        let mut v = vec![S::zero(); dim];
        let mut sh = vec![S::zero(); dim];
        let mut t = vec![S::zero(); dim];
        let mut rho = ops.dot(&rt, &r);
        loop {
            ph.copy_from_slice(&p);
            ops.precond(&mut ph);
            ops.matvec(&ph, &mut v);
            let den = ops.dot(&rt, &v);
            if den.abs() <= eps {
                break 'run Flag::Breakdown;
            }
            let alpha = rho / den;
            ops.axpy(alpha, &ph, &mut x);
            ops.axpy(-alpha, &v, &mut r);
            let snorm = ops.norm(&r);
            if snorm / bnrm2 < cfg.tol {
                history.push(snorm / bnrm2);
                iter += 1;
                break 'run Flag::Converged;
            }
            sh.copy_from_slice(&r);
            ops.precond(&mut sh);
            ops.matvec(&sh, &mut t);
            let tt = ops.dot(&t, &t).re();
            let ts = ops.dot(&t, &r);
            let omega = match safeguarded_omega(tt, ts, snorm, cfg.kappa) {
                Ok(c) => c.omega,
                Err(_) => break 'run Flag::Breakdown,
            };
            omegas.push(omega);
            ops.axpy(omega, &sh, &mut x);
            ops.axpy(-omega, &t, &mut r);
            let err = ops.norm(&r) / bnrm2;
            history.push(err);
            iter += 1;
            if err < cfg.tol {
                break 'run Flag::Converged;
            }
            if !err.is_finite() {
                break 'run Flag::Breakdown;
            }
            if iter >= cfg.max_it {
                break 'run Flag::MaxIter;
            }
            let rho_next = ops.dot(&rt, &r);
            if rho_next.abs() <= eps {
                break 'run Flag::Breakdown;
            }
            // p = r + β (p − ω v)
            let beta = (rho_next / rho) * (alpha / omega);
            ops.axpy(-omega, &v, &mut p);
            ops.xpay(&r, beta, &mut p);
            rho = rho_next;
        }
    };

    ops.residual(b, &x, &mut r);
    let true_err = norm2(&r) / bnrm2;
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
        omega_history: omegas,
    })
}
