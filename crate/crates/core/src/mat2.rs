use crate::Complex;
use std::ops::{Add, Mul, Sub};

/// 2x2 complex matrix, row-major `[[a, b], [c, d]]`.
///
/// The operator norm (largest singular value) is THE norm for matrices in
/// this crate; it is sub-multiplicative and computable in closed form for
/// 2x2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Mat2 {
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        assert!(
            a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite(),
            "matrix entries must be finite"
        );
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        )
    }

    pub fn zero() -> Self {
        let z = Complex::new(0.0, 0.0);
        Self { a: z, b: z, c: z, d: z }
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn scale(&self, s: Complex) -> Self {
        Self {
            a: self.a * s,
            b: self.b * s,
            c: self.c * s,
            d: self.d * s,
        }
    }

    pub fn matvec(&self, v: (Complex, Complex)) -> (Complex, Complex) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.singular_values().0
    }

    /// Both singular values, `(sigma_1, sigma_2)` with `sigma_1 >= sigma_2`.
    ///
    /// sigma_1 comes from the eigenvalues of M*M; sigma_2 is recovered from
    /// |det| / sigma_1, which stays accurate when the matrix is nearly
    /// rank-one.
    pub fn singular_values(&self) -> (f64, f64) {
        let p = self.a.norm_sqr() + self.c.norm_sqr();
        let r = self.b.norm_sqr() + self.d.norm_sqr();
        let q = self.a.conj() * self.b + self.c.conj() * self.d;
        let half = 0.5 * (p + r);
        let disc = (0.5 * (p - r)).hypot(q.norm());
        let lam_max = half + disc;
        let s1 = lam_max.max(0.0).sqrt();
        let det = self.det().norm();
        let s2 = if s1 > 0.0 { det / s1 } else { 0.0 };
        (s1, s2)
    }

    /// Right singular direction of the smallest singular value — the
    /// numerical kernel of a (near-)rank-one matrix. `None` when the two
    /// singular values coincide (no distinguished direction).
    pub fn min_singular_direction(&self) -> Option<(Complex, Complex)> {
        let p = self.a.norm_sqr() + self.c.norm_sqr();
        let r = self.b.norm_sqr() + self.d.norm_sqr();
        let q = self.a.conj() * self.b + self.c.conj() * self.d;
        let disc = (0.5 * (p - r)).hypot(q.norm());
        if disc == 0.0 {
            return None;
        }
        let lam_min = 0.5 * (p + r) - disc;
        // eigenvector of [[p, q], [conj q, r]] for lam_min; use the row with
        // the larger pivot
        let v_a = (-q, Complex::new(p - lam_min, 0.0));
        let v_b = (Complex::new(r - lam_min, 0.0), -q.conj());
        let na = v_a.0.norm_sqr() + v_a.1.norm_sqr();
        let nb = v_b.0.norm_sqr() + v_b.1.norm_sqr();
        let (v1, v2) = if na >= nb { v_a } else { v_b };
        let norm = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
        if norm == 0.0 {
            return None;
        }
        Some((v1 / norm, v2 / norm))
    }

    pub fn frobenius(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.a.norm_sqr() == 0.0
            && self.b.norm_sqr() == 0.0
            && self.c.norm_sqr() == 0.0
            && self.d.norm_sqr() == 0.0
    }

    /// Inverse; `None` for (numerically) singular matrices.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 {
            return None;
        }
        Some(Self {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        })
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2 {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c + rhs.c,
            d: self.d + rhs.d,
        }
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2 {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            c: self.c - rhs.c,
            d: self.d - rhs.d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use approx::assert_abs_diff_eq;

    fn rc(rng: &mut SplitMix64) -> Complex {
        Complex::new(rng.next_in(-3.0, 3.0), rng.next_in(-3.0, 3.0))
    }

    #[test]
    fn rotation_is_isometry() {
        // [[0, -1], [1, 0]] has both singular values 1
        let m = Mat2::new(
            Complex::new(0.0, 0.0),
            Complex::new(-1.0, 0.0),
            Complex::new(1.0, 0.0),
            Complex::new(0.0, 0.0),
        );
        let (s1, s2) = m.singular_values();
        assert_abs_diff_eq!(s1, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s2, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn singular_values_against_vector_sup() {
        // sigma_1 = sup ||Mv|| over unit v, probed on a dense circle sweep
        let mut rng = SplitMix64::new(42);
        for _ in 0..50 {
            let m = Mat2::new(rc(&mut rng), rc(&mut rng), rc(&mut rng), rc(&mut rng));
            let (s1, s2) = m.singular_values();
            let mut sup: f64 = 0.0;
            let mut inf: f64 = f64::INFINITY;
            for i in 0..=400 {
                let t = i as f64 * std::f64::consts::FRAC_PI_2 / 400.0;
                for j in 0..128 {
                    let ph = j as f64 * std::f64::consts::TAU / 128.0;
                    let v = (
                        Complex::new(t.cos(), 0.0),
                        Complex::from_polar(t.sin(), ph),
                    );
                    let (w0, w1) = m.matvec(v);
                    let norm = (w0.norm_sqr() + w1.norm_sqr()).sqrt();
                    sup = sup.max(norm);
                    inf = inf.min(norm);
                }
            }
            assert_abs_diff_eq!(s1, sup, epsilon = 1e-2 * s1.max(1.0));
            assert_abs_diff_eq!(s2, inf, epsilon = 1e-2 * s1.max(1.0));
        }
    }

    #[test]
    fn norm_submultiplicative_and_det_multiplicative() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..200 {
            let m = Mat2::new(rc(&mut rng), rc(&mut rng), rc(&mut rng), rc(&mut rng));
            let k = Mat2::new(rc(&mut rng), rc(&mut rng), rc(&mut rng), rc(&mut rng));
            let prod = m * k;
            assert!(prod.op_norm() <= m.op_norm() * k.op_norm() * (1.0 + 1e-12));
            assert!((prod.det() - m.det() * k.det()).norm() < 1e-10);
        }
    }

    #[test]
    fn min_singular_direction_annihilates_rank_one() {
        let mut rng = SplitMix64::new(12);
        for _ in 0..100 {
            // rank one: outer product of two random vectors
            let (u1, u2) = (rc(&mut rng), rc(&mut rng));
            let (w1, w2) = (rc(&mut rng), rc(&mut rng));
            let m = Mat2::new(u1 * w1, u1 * w2, u2 * w1, u2 * w2);
            if m.op_norm() < 0.1 {
                continue;
            }
            let (v1, v2) = m.min_singular_direction().unwrap();
            let (r1, r2) = m.matvec((v1, v2));
            let res = (r1.norm_sqr() + r2.norm_sqr()).sqrt();
            assert!(res <= 1e-12 * m.op_norm(), "kernel residual {res}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = SplitMix64::new(9);
        for _ in 0..100 {
            let m = Mat2::new(rc(&mut rng), rc(&mut rng), rc(&mut rng), rc(&mut rng));
            if let Some(inv) = m.inverse() {
                let p = m * inv;
                assert!((p - Mat2::identity()).frobenius() < 1e-10);
            }
        }
    }
}
