//! Index functions scheduling the two-level iteration.
//!
//! Every global iteration index `k` splits uniquely as `k = j·n + i` with
//! `1 ≤ i ≤ n`; [`g_index`] returns `j` and [`r_index`] returns `i`. The
//! solvers iterate over `(j, i)` directly, so these functions serve as the
//! reference schedule in tests.

/// `floor((k - 1) / n)`, rounding toward −∞ for negative arguments too.
pub fn g_index(n: i64, k: i64) -> i64 {
    assert!(n >= 1, "block size must be positive");
    (k - 1).div_euclid(n)
}

/// `k - n·g_index(n, k)`, always in `1..=n`.
pub fn r_index(n: i64, k: i64) -> i64 {
    k - n * g_index(n, k)
}

/// `(j, i)` with `k = j·n + i` and `1 ≤ i ≤ n`.
pub fn split(n: i64, k: i64) -> (i64, i64) {
    (g_index(n, k), r_index(n, k))
}
