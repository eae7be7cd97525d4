//! Small dense kernels for tridiagonal problems.
//!
//! Everything here operates on explicitly passed diagonals, so callers stay
//! in control of how operator sections are sampled. The eigenvalue solver is
//! the Sturm-count bisection for real symmetric tridiagonal matrices; it is
//! slower than QL with shifts but its correctness argument is one line (the
//! negcount is monotone in the shift), which is what we want from the
//! spectrum oracle.

use crate::rng::SplitMix64;
use crate::Complex;

/// Number of eigenvalues of the symmetric tridiagonal matrix `(diag, off)`
/// strictly below `shift`, by counting negative pivots of the shifted
/// LDL^T factorisation.
pub fn sturm_negcount(diag: &[f64], off: &[f64], shift: f64) -> usize {
    let n = diag.len();
    debug_assert_eq!(off.len(), n.saturating_sub(1));
    let mut count = 0usize;
    let mut d = diag[0] - shift;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let mut denom = d;
        if denom == 0.0 {
            // standard guard: nudge an exactly-zero pivot
            denom = f64::EPSILON * (off[i - 1].abs() + 1.0);
        }
        d = (diag[i] - shift) - off[i - 1] * off[i - 1] / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a real symmetric tridiagonal matrix, ascending.
pub fn symtridiag_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    assert_eq!(off.len(), n - 1, "off-diagonal length must be n-1");

    // Gershgorin bracket
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 }
            + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let tol = 8.0 * f64::EPSILON * scale;
    let pad = tol.max(1e-300);
    lo -= pad;
    hi += pad;

    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            while b - a > tol {
                let mid = 0.5 * (a + b);
                if sturm_negcount(diag, off, mid) > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

macro_rules! tridiag_solve_impl {
    ($name:ident, $t:ty, $zero:expr, $mag:expr) => {
        /// Solve a tridiagonal system by Gaussian elimination with partial
        /// pivoting. `sub[i]` couples row i+1 to column i, `sup[i]` row i to
        /// column i+1. Returns `None` when a pivot is exactly zero.
        pub fn $name(sub: &[$t], diag: &[$t], sup: &[$t], rhs: &[$t]) -> Option<Vec<$t>> {
            let n = diag.len();
            assert!(sub.len() == n.saturating_sub(1) && sup.len() == n.saturating_sub(1));
            assert_eq!(rhs.len(), n);
            if n == 0 {
                return Some(Vec::new());
            }
            let zero: $t = $zero;
            let mag = $mag;

            // Working bands. Row swaps create fill-in on a second
            // superdiagonal, so row i carries (d[i], u1[i], u2[i]) at
            // columns i, i+1, i+2.
            let mut d: Vec<$t> = diag.to_vec();
            let mut u1: Vec<$t> = sup.to_vec();
            let mut u2: Vec<$t> = vec![zero; n.saturating_sub(2)];
            let mut x: Vec<$t> = rhs.to_vec();

            for i in 0..n - 1 {
                // row i+1 bands before elimination: (sub[i], d[i+1], u1[i+1])
                let below = sub[i];
                let (pivot_row, other_row, other_rhs);
                if mag(below) > mag(d[i]) {
                    // swap rows i and i+1
                    pivot_row = (
                        below,
                        d[i + 1],
                        if i + 1 < n - 1 { u1[i + 1] } else { zero },
                    );
                    other_row = (d[i], u1[i], if i < u2.len() { u2[i] } else { zero });
                    other_rhs = x[i];
                    x[i] = x[i + 1];
                } else {
                    pivot_row = (d[i], u1[i], if i < u2.len() { u2[i] } else { zero });
                    other_row = (
                        below,
                        d[i + 1],
                        if i + 1 < n - 1 { u1[i + 1] } else { zero },
                    );
                    other_rhs = x[i + 1];
                }
                if mag(pivot_row.0) == 0.0 {
                    return None;
                }
                d[i] = pivot_row.0;
                u1[i] = pivot_row.1;
                if i < u2.len() {
                    u2[i] = pivot_row.2;
                }
                let m = other_row.0 / pivot_row.0;
                d[i + 1] = other_row.1 - m * pivot_row.1;
                if i + 1 < n - 1 {
                    u1[i + 1] = other_row.2 - m * pivot_row.2;
                }
                x[i + 1] = other_rhs - m * x[i];
            }

            if mag(d[n - 1]) == 0.0 {
                return None;
            }
            let mut sol = vec![zero; n];
            sol[n - 1] = x[n - 1] / d[n - 1];
            if n >= 2 {
                sol[n - 2] = (x[n - 2] - u1[n - 2] * sol[n - 1]) / d[n - 2];
            }
            for i in (0..n.saturating_sub(2)).rev() {
                sol[i] = (x[i] - u1[i] * sol[i + 1] - u2[i] * sol[i + 2]) / d[i];
            }
            Some(sol)
        }
    };
}

tridiag_solve_impl!(tridiag_solve_real, f64, 0.0, |t: f64| t.abs());
tridiag_solve_impl!(tridiag_solve_complex, Complex, Complex::new(0.0, 0.0), |t: Complex| t
    .norm_sqr());

/// One eigenvector of a symmetric tridiagonal matrix by inverse iteration,
/// normalised to unit length. `lambda` should be an eigenvalue to working
/// precision; for clustered eigenvalues the returned vector is some unit
/// vector of the cluster span, which is all the boundary-mass filter needs.
pub fn symtridiag_eigenvector(diag: &[f64], off: &[f64], lambda: f64, seed: u64) -> Vec<f64> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(1.0f64, |m, &t| m.max(t.abs()));
    let shift = lambda + 1e-12 * scale;
    let mut rng = SplitMix64::new(seed ^ 0x5eed_1234_abcd_0001);
    let mut v: Vec<f64> = (0..n).map(|_| rng.next_f64() - 0.5).collect();
    normalize(&mut v);
    let d: Vec<f64> = diag.iter().map(|&t| t - shift).collect();
    for _ in 0..3 {
        match tridiag_solve_real(off, &d, off, &v) {
            Some(mut w) => {
                normalize(&mut w);
                v = w;
            }
            None => break,
        }
    }
    v
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
