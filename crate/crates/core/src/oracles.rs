//! Dense reference methods.
//!
//! Everything here works on row-major dense matrices with naive loops and
//! shares no kernels with the sparse solvers, so it can serve as an
//! independent check on them. Performance is not a goal.

use crate::error::{Error, Result};
use crate::index_map::{g_index, r_index};
use crate::sparse::{CsrMatrix, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    n: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn new(n: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::mismatch("dense matrix entries", n * n, data.len()));
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn from_csr(a: &CsrMatrix<S>) -> Self {
        assert!(a.is_square(), "dense oracles need a square matrix");
        DenseMatrix {
            n: a.nrows(),
            data: a.to_dense(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = S::one();
        }
        DenseMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[i * self.n + j]
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let row = &self.data[i * self.n..(i + 1) * self.n];
                row.iter().zip(v).fold(S::zero(), |acc, (a, x)| acc + *a * *x)
            })
            .collect()
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![S::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        DenseMatrix { n, data }
    }
}

fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

fn norm<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.abs_sqr()).sum::<f64>().sqrt()
}

fn residual<S: Scalar>(a: &DenseMatrix<S>, b: &[S], x: &[S]) -> Vec<S> {
    a.matvec(x).iter().zip(b).map(|(ax, bi)| *bi - *ax).collect()
}

/// Gaussian elimination with partial pivoting on a general `m × m`
/// row-major system.
fn gauss_solve<S: Scalar>(m: usize, mut a: Vec<S>, mut b: Vec<S>) -> Result<Vec<S>> {
    for k in 0..m {
        let piv = (k..m)
            .max_by(|&i, &j| a[i * m + k].abs().total_cmp(&a[j * m + k].abs()))
            .expect("nonempty range");
        if a[piv * m + k].abs() == 0.0 {
            return Err(Error::SingularMatrix(k));
        }
        if piv != k {
            for j in 0..m {
                a.swap(k * m + j, piv * m + j);
            }
            b.swap(k, piv);
        }
        let d = a[k * m + k];
        for i in k + 1..m {
            let l = a[i * m + k] / d;
            if l == S::zero() {
                continue;
            }
            for j in k..m {
                let u = a[k * m + j];
                a[i * m + j] -= l * u;
            }
            let bk = b[k];
            b[i] -= l * bk;
        }
    }
    let mut x = vec![S::zero(); m];
    for i in (0..m).rev() {
        let mut s = b[i];
        for j in i + 1..m {
            s -= a[i * m + j] * x[j];
        }
        x[i] = s / a[i * m + i];
    }
    Ok(x)
}

pub fn dense_direct_solve<S: Scalar>(a: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>> {
    if b.len() != a.n {
        return Err(Error::mismatch("dense_direct_solve rhs", a.n, b.len()));
    }
    gauss_solve(a.n, a.data.clone(), b.to_vec())
}

/// Doolittle LU without pivoting: unit lower `L` and upper `U`.
pub fn dense_lu_nopivot<S: Scalar>(a: &DenseMatrix<S>) -> Result<(DenseMatrix<S>, DenseMatrix<S>)> {
    let n = a.n;
    let mut l = DenseMatrix::identity(n);
    let mut u = DenseMatrix::new(n, vec![S::zero(); n * n])?;
    for i in 0..n {
        for j in i..n {
            let mut s = a.get(i, j);
            for k in 0..i {
                s -= l.get(i, k) * u.get(k, j);
            }
            u.data[i * n + j] = s;
        }
        if u.get(i, i).abs() == 0.0 {
            return Err(Error::SingularMatrix(i));
        }
        for r in i + 1..n {
            let mut s = a.get(r, i);
            for k in 0..i {
                s -= l.get(r, k) * u.get(k, i);
            }
            l.data[r * n + i] = s / u.get(i, i);
        }
    }
    Ok((l, u))
}

/// Arnoldi with modified Gram–Schmidt. Returns the orthonormal basis and
/// the `(m+1) × m` Hessenberg matrix (row-major, `m + 1` rows); stops early
/// on an invariant subspace.
fn arnoldi<S: Scalar>(a: &DenseMatrix<S>, r0: &[S], steps: usize) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
    let beta = norm(r0);
    let mut v = vec![r0.iter().map(|x| x.scale(1.0 / beta)).collect::<Vec<S>>()];
    let mut h: Vec<Vec<S>> = Vec::new(); // h[j] is column j, length j + 2
    for j in 0..steps {
        let mut w = a.matvec(&v[j]);
        let mut col = vec![S::zero(); j + 2];
        for (i, vi) in v.iter().enumerate() {
            let hij = dot(vi, &w);
            col[i] = hij;
            for (wk, vk) in w.iter_mut().zip(vi) {
                *wk -= hij * *vk;
            }
        }
        let hn = norm(&w);
        col[j + 1] = S::from_real(hn);
        h.push(col);
        if hn <= 1e-14 * beta {
            break;
        }
        v.push(w.iter().map(|x| x.scale(1.0 / hn)).collect());
    }
    (v, h)
}

fn combine<S: Scalar>(x0: &[S], v: &[Vec<S>], y: &[S]) -> Vec<S> {
    let mut x = x0.to_vec();
    for (vj, yj) in v.iter().zip(y) {
        for (xi, vi) in x.iter_mut().zip(vj) {
            *xi += *yj * *vi;
        }
    }
    x
}

/// FOM residual norms `‖b − A x_m‖₂` for `m = 0..=steps`. The list ends
/// early at an invariant subspace, where the iterate is exact.
pub fn fom_reference<S: Scalar>(a: &DenseMatrix<S>, b: &[S], x0: &[S], steps: usize) -> Result<Vec<f64>> {
    let r0 = residual(a, b, x0);
    let beta = norm(&r0);
    let mut out = vec![beta];
    if beta == 0.0 {
        return Ok(out);
    }
    let (v, h) = arnoldi(a, &r0, steps.min(a.n));
    for m in 1..=h.len() {
        let mut hm = vec![S::zero(); m * m];
        for j in 0..m {
            for i in 0..(j + 2).min(m) {
                hm[i * m + j] = h[j][i];
            }
        }
        let mut rhs = vec![S::zero(); m];
        rhs[0] = S::from_real(beta);
        let y = gauss_solve(m, hm, rhs)?;
        let x = combine(x0, &v[..m], &y);
        out.push(norm(&residual(a, b, &x)));
    }
    Ok(out)
}

/// GMRES residual norms `‖b − A x_m‖₂` for `m = 0..=steps`, solving the
/// Hessenberg least-squares problems with Givens rotations.
pub fn gmres_reference<S: Scalar>(a: &DenseMatrix<S>, b: &[S], x0: &[S], steps: usize) -> Vec<f64> {
    let r0 = residual(a, b, x0);
    let beta = norm(&r0);
    let mut out = vec![beta];
    if beta == 0.0 {
        return out;
    }
    let (v, h) = arnoldi(a, &r0, steps.min(a.n));
    let mut rot: Vec<(f64, S)> = Vec::new(); // (c, s) with G = [c, s; −conj(s), c]
    let mut rcols: Vec<Vec<S>> = Vec::new();
    let mut g = vec![S::from_real(beta)];
    for (m, col) in h.iter().enumerate() {
        let mut col = col.clone();
        for (i, &(c, s)) in rot.iter().enumerate() {
            let (p, q) = (col[i], col[i + 1]);
            col[i] = p.scale(c) + s * q;
            col[i + 1] = q.scale(c) - s.conj() * p;
        }
        let (p, q) = (col[m], col[m + 1]);
        let rr = (p.abs_sqr() + q.abs_sqr()).sqrt();
        let (c, s) = if p.abs() == 0.0 {
            (0.0, q.conj().scale(1.0 / q.abs()))
        } else {
            let phase = p.scale(1.0 / p.abs());
            (p.abs() / rr, phase * q.conj().scale(1.0 / rr))
        };
        col[m] = p.scale(c) + s * q;
        col[m + 1] = S::zero();
        rot.push((c, s));
        let gm = g[m];
        g[m] = gm.scale(c);
        g.push(-(s.conj() * gm));
        rcols.push(col);

        let k = m + 1;
        let mut y = vec![S::zero(); k];
        for i in (0..k).rev() {
            let mut t = g[i];
            for j in i + 1..k {
                t -= rcols[j][i] * y[j];
            }
            y[i] = t / rcols[i][i];
        }
        let x = combine(x0, &v[..k], &y);
        out.push(norm(&residual(a, b, &x)));
    }
    out
}

/// Textbook BiCG with shadow residual `shadow`, using `A^H` on the shadow
/// sequence. Residual norms for `m = 0..=steps`; stops early when the
/// residual vanishes.
pub fn bicg_reference<S: Scalar>(
    a: &DenseMatrix<S>,
    b: &[S],
    x0: &[S],
    shadow: &[S],
    steps: usize,
) -> Result<Vec<f64>> {
    let ah = a.conj_transpose();
    let mut x = x0.to_vec();
    let mut r = residual(a, b, x0);
    let mut rt = shadow.to_vec();
    let mut p = r.clone();
    let mut pt = rt.clone();
    let mut rho = dot(&rt, &r);
    let mut out = vec![norm(&r)];
    for _ in 0..steps {
        if out.last() == Some(&0.0) {
            break;
        }
        let ap = a.matvec(&p);
        let den = dot(&pt, &ap);
        if den.abs() == 0.0 || rho.abs() == 0.0 {
            return Err(Error::Breakdown("bicg pivot"));
        }
        let alpha = rho / den;
        let ahpt = ah.matvec(&pt);
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            rt[i] -= alpha.conj() * ahpt[i];
        }
        out.push(norm(&r));
        let rho_next = dot(&rt, &r);
        let beta = rho_next / rho;
        for i in 0..x.len() {
            p[i] = r[i] + beta * p[i];
            pt[i] = rt[i] + beta.conj() * pt[i];
        }
        rho = rho_next;
    }
    Ok(out)
}

/// Conjugate gradients for Hermitian positive definite `A`.
pub fn cg_reference<S: Scalar>(a: &DenseMatrix<S>, b: &[S], x0: &[S], steps: usize) -> Vec<f64> {
    let mut x = x0.to_vec();
    let mut r = residual(a, b, x0);
    let mut p = r.clone();
    let mut rr = dot(&r, &r).re();
    let mut out = vec![rr.sqrt()];
    for _ in 0..steps {
        if rr == 0.0 {
            break;
        }
        let ap = a.matvec(&p);
        let alpha = S::from_real(rr) / dot(&p, &ap);
        for i in 0..x.len() {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_next = dot(&r, &r).re();
        out.push(rr_next.sqrt());
        let beta = S::from_real(rr_next / rr);
        for i in 0..x.len() {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_next;
    }
    out
}

/// Iterates of the unpreconditioned ML(n)BiCGStabt recurrence.
#[derive(Debug, Clone)]
pub struct LiteralRun<S> {
    /// `x_k` for `k = 0, 1, …`.
    pub iterates: Vec<Vec<S>>,
    /// `‖r_k‖₂ / ‖b‖₂` for the same `k`.
    pub residuals: Vec<f64>,
    pub converged: bool,
}

/// Direct transcription of unpreconditioned ML(n)BiCGStabt on global
/// index `k`, with every vector stored by its index and the loop ranges
/// evaluated through `g_n` and `r_n`. `q` holds the `n` shadow vectors.
///
/// In the first cycle the β̃ sweep is empty and the `1/ω` term is dropped,
/// so `g_k` starts from `r_k`. Stops when `‖r_k‖/‖b‖ < tol` (including the
/// intermediate `u_k`) or after `max_k` steps.
pub fn ml_n_bicgstabt_literal<S: Scalar>(
    a: &DenseMatrix<S>,
    b: &[S],
    x0: &[S],
    q: &[Vec<S>],
    tol: f64,
    max_k: usize,
) -> Result<LiteralRun<S>> {
    let n = q.len() as i64;
    if n < 1 {
        return Err(Error::InvalidConfig("need at least one shadow vector".into()));
    }
    let bn = {
        let v = norm(b);
        if v == 0.0 {
            1.0
        } else {
            v
        }
    };
    let qv = |idx: i64| -> &[S] { &q[(idx - 1) as usize] };
    let ah = a.conj_transpose();
    let f: Vec<Vec<S>> = q[..q.len() - 1].iter().map(|qi| ah.matvec(qi)).collect();
    let fv = |idx: i64| -> &[S] { &f[(idx - 1) as usize] };

    let mut x = vec![x0.to_vec()];
    let mut r = vec![residual(a, b, x0)];
    let mut res = vec![norm(&r[0]) / bn];
    let mut g = vec![r[0].clone()];
    let mut w = vec![a.matvec(&g[0])];
    let mut c = vec![dot(qv(1), &w[0])];
    let mut omega: Vec<S> = vec![S::zero()]; // ω_0 is never used
    if res[0] < tol {
        return Ok(LiteralRun { iterates: x, residuals: res, converged: true });
    }
    let len = b.len();
    for k in 1..=max_k as i64 {
        let ku = k as usize;
        if c[ku - 1].abs() == 0.0 {
            return Err(Error::Breakdown("c"));
        }
        let alpha = dot(qv(r_index(n, k)), &r[ku - 1]) / c[ku - 1];
        let jn = g_index(n, k) * n;
        let mut xk: Vec<S> = (0..len).map(|t| x[ku - 1][t] + alpha * g[ku - 1][t]).collect();
        let rk: Vec<S>;
        let mut gk = vec![S::zero(); len];
        if r_index(n, k) < n {
            rk = (0..len).map(|t| r[ku - 1][t] - alpha * w[ku - 1][t]).collect();
            let mut zw = rk.clone();
            let lo = (k - n).max(0);
            for s in lo..jn {
                let su = s as usize;
                let bt = -dot(qv(r_index(n, s + 1)), &zw) / c[su];
                for t in 0..len {
                    zw[t] += bt * w[su][t];
                    gk[t] += bt * g[su][t];
                }
            }
            if lo < jn {
                let om = omega[g_index(n, k + 1) as usize];
                for t in 0..len {
                    gk[t] = zw[t] - gk[t] / om;
                }
            } else {
                gk = zw;
            }
            for s in jn..k {
                let su = s as usize;
                let bt = -dot(fv(r_index(n, s + 1)), &gk) / c[su];
                for t in 0..len {
                    gk[t] += bt * g[su][t];
                }
            }
        } else {
            let u: Vec<S> = (0..len).map(|t| r[ku - 1][t] - alpha * w[ku - 1][t]).collect();
            if norm(&u) / bn < tol {
                x.push(xk);
                res.push(norm(&u) / bn);
                return Ok(LiteralRun { iterates: x, residuals: res, converged: true });
            }
            let au = a.matvec(&u);
            let aun = dot(&au, &au);
            if aun.abs() == 0.0 {
                return Err(Error::ZeroDenominator);
            }
            let om = dot(&au, &u) / aun;
            if om.abs() == 0.0 {
                return Err(Error::OmegaBreakdown);
            }
            debug_assert_eq!(omega.len() as i64, g_index(n, k + 1));
            omega.push(om);
            for t in 0..len {
                xk[t] += om * u[t];
            }
            rk = (0..len).map(|t| u[t] - om * au[t]).collect();
            let mut zw = rk.clone();
            for s in jn..k {
                let su = s as usize;
                let bt = -dot(qv(r_index(n, s + 1)), &zw) / c[su];
                for t in 0..len {
                    zw[t] += bt * w[su][t];
                    gk[t] += bt * g[su][t];
                }
            }
            for t in 0..len {
                gk[t] = zw[t] - gk[t] / om;
            }
        }
        let rn = norm(&rk) / bn;
        x.push(xk);
        r.push(rk);
        res.push(rn);
        if rn < tol {
            return Ok(LiteralRun { iterates: x, residuals: res, converged: true });
        }
        let wk = a.matvec(&gk);
        c.push(dot(qv(r_index(n, k + 1)), &wk));
        g.push(gk);
        w.push(wk);
    }
    Ok(LiteralRun { iterates: x, residuals: res, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::sparse::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_dense<S: Scalar>(n: usize, shift: f64, seed: u64) -> DenseMatrix<S> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data: Vec<S> = gallery::random_vector(n * n, &mut rng);
        for i in 0..n {
            data[i * n + i] += S::from_real(shift);
        }
        DenseMatrix::new(n, data).unwrap()
    }

    fn rel_residual<S: Scalar>(a: &DenseMatrix<S>, b: &[S], x: &[S]) -> f64 {
        norm(&residual(a, b, x)) / norm(b)
    }

    #[test]
    fn direct_solve_examples() {
        let b = vec![1.0, -2.0, 3.0];
        assert_eq!(dense_direct_solve(&DenseMatrix::identity(3), &b).unwrap(), b);
        let d = DenseMatrix::new(2, vec![2.0, 0.0, 0.0, 4.0]).unwrap();
        assert_eq!(dense_direct_solve(&d, &[2.0, 4.0]).unwrap(), vec![1.0, 1.0]);
        let s = DenseMatrix::new(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(dense_direct_solve(&s, &[1.0, 1.0]), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn direct_solve_residual() {
        let a = random_dense::<f64>(30, 0.0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b: Vec<f64> = gallery::random_vector(30, &mut rng);
        let x = dense_direct_solve(&a, &b).unwrap();
        assert!(rel_residual(&a, &b, &x) <= 1e-10);
        let a = random_dense::<Complex64>(30, 0.0, 3);
        let b: Vec<Complex64> = gallery::random_vector(30, &mut rng);
        let x = dense_direct_solve(&a, &b).unwrap();
        assert!(rel_residual(&a, &b, &x) <= 1e-10);
    }

    #[test]
    fn lu_nopivot_reproduces_matrix() {
        let a = random_dense::<Complex64>(8, 5.0, 4);
        let (l, u) = dense_lu_nopivot(&a).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..8 {
                    s += l.get(i, k) * u.get(k, j);
                }
                assert!((s - a.get(i, j)).norm() < 1e-12);
                if j > i {
                    assert_eq!(l.get(i, j), Complex64::new(0.0, 0.0));
                }
                if i > j {
                    assert_eq!(u.get(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn krylov_examples() {
        let id = DenseMatrix::<f64>::identity(4);
        let b = [1.0, 2.0, 3.0, 4.0];
        let z = [0.0; 4];
        let fom = fom_reference(&id, &b, &z, 4).unwrap();
        assert_eq!(fom.len(), 2);
        assert!(fom[1] < 1e-14);
        let gm = gmres_reference(&id, &b, &z, 4);
        assert_eq!(gm.len(), 2);
        assert!(gm[1] < 1e-14);

        let d = DenseMatrix::new(2, vec![1.0, 0.0, 0.0, 2.0]).unwrap();
        let fom = fom_reference(&d, &[1.0, 1.0], &[0.0, 0.0], 2).unwrap();
        assert!(fom[1] > 1e-3);
        assert!(fom[2] < 1e-14);
    }

    /// Explicit Krylov basis `[r0, A r0, …]` and the projected solves.
    fn projection_oracle(a: &DenseMatrix<Complex64>, b: &[Complex64], m: usize, minimal: bool) -> f64 {
        let n = a.n();
        let x0 = vec![Complex64::new(0.0, 0.0); n];
        let r0 = residual(a, b, &x0);
        let mut k = vec![r0.clone()];
        for _ in 1..m {
            let next = a.matvec(k.last().unwrap());
            k.push(next);
        }
        let ak: Vec<Vec<Complex64>> = k.iter().map(|v| a.matvec(v)).collect();
        let test = if minimal { &ak } else { &k };
        let mut lhs = vec![Complex64::new(0.0, 0.0); m * m];
        let mut rhs = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            for j in 0..m {
                lhs[i * m + j] = dot(&test[i], &ak[j]);
            }
            rhs[i] = dot(&test[i], &r0);
        }
        let y = gauss_solve(m, lhs, rhs).unwrap();
        let x = combine(&x0, &k, &y);
        norm(&residual(a, b, &x))
    }

    #[test]
    fn fom_and_gmres_match_projection_oracles() {
        let a = random_dense::<Complex64>(12, 4.0, 9);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let b: Vec<Complex64> = gallery::random_vector(12, &mut rng);
        let x0 = vec![Complex64::new(0.0, 0.0); 12];
        let fom = fom_reference(&a, &b, &x0, 8).unwrap();
        let gm = gmres_reference(&a, &b, &x0, 8);
        for m in 1..=8 {
            let pf = projection_oracle(&a, &b, m, false);
            let pg = projection_oracle(&a, &b, m, true);
            assert!((fom[m] - pf).abs() <= 1e-6 * fom[0], "fom m={m}: {} vs {pf}", fom[m]);
            assert!((gm[m] - pg).abs() <= 1e-6 * gm[0], "gmres m={m}: {} vs {pg}", gm[m]);
        }
    }

    #[test]
    fn gmres_is_monotone_and_below_fom() {
        let a = random_dense::<f64>(12, 2.0, 11);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let b: Vec<f64> = gallery::random_vector(12, &mut rng);
        let x0 = vec![0.0; 12];
        let fom = fom_reference(&a, &b, &x0, 12).unwrap();
        let gm = gmres_reference(&a, &b, &x0, 12);
        for m in 1..gm.len() {
            assert!(gm[m] <= gm[m - 1] * (1.0 + 1e-10) + 1e-13);
        }
        for m in 0..fom.len().min(gm.len()) {
            assert!(gm[m] <= fom[m] * (1.0 + 1e-8) + 1e-12);
        }
    }

    #[test]
    fn bicg_matches_cg_on_hpd() {
        let b0 = random_dense::<Complex64>(10, 0.0, 13);
        // A = B^H B + I
        let bh = b0.conj_transpose();
        let mut data = vec![Complex64::new(0.0, 0.0); 100];
        for i in 0..10 {
            for j in 0..10 {
                let mut s = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                for k in 0..10 {
                    s += bh.get(i, k) * b0.get(k, j);
                }
                data[i * 10 + j] = s;
            }
        }
        let a = DenseMatrix::new(10, data).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let b: Vec<Complex64> = gallery::random_vector(10, &mut rng);
        let x0 = vec![Complex64::new(0.0, 0.0); 10];
        let r0 = residual(&a, &b, &x0);
        let bicg = bicg_reference(&a, &b, &x0, &r0, 8).unwrap();
        let cg = cg_reference(&a, &b, &x0, 8);
        for (p, q) in bicg.iter().zip(&cg) {
            assert!((p - q).abs() <= 1e-8 * cg[0]);
        }
        let id = DenseMatrix::<f64>::identity(3);
        let one = bicg_reference(&id, &[1.0, 2.0, 3.0], &[0.0; 3], &[1.0, 2.0, 3.0], 5).unwrap();
        assert_eq!(one.len(), 2);
        assert!(one[1] == 0.0);
    }

    #[test]
    fn literal_transcription_solves() {
        let a = random_dense::<f64>(16, 6.0, 15);
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let b: Vec<f64> = gallery::random_vector(16, &mut rng);
        for n in [1, 2, 3, 5] {
            let mut q = vec![b.clone()];
            for _ in 1..n {
                q.push(gallery::random_vector(16, &mut rng));
            }
            let run = ml_n_bicgstabt_literal(&a, &b, &[0.0; 16], &q, 1e-10, 200).unwrap();
            assert!(run.converged, "n = {n}");
            assert!(rel_residual(&a, &b, run.iterates.last().unwrap()) < 1e-8);
        }
    }
}
