//! The complex projective line and linear-fractional actions on it.
//!
//! Points of PC^2 are identified with the extended plane through the chart
//! `span(v1, v2) -> v2/v1`, with `infinity` for the line spanned by e_2
//! (i.e. v1 = 0). A nonzero 2x2 matrix acts on the complement of its kernel
//! as a Mobius transformation; both the chart form and the homogeneous form
//! are provided and agree up to chordal distance ~1e-14.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::Complex;

/// Extended complex number: a finite value or the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex::new(re, im))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn value(&self) -> Option<Complex> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }

    /// Reciprocal on the sphere: 1/0 = infinity, 1/infinity = 0.
    pub fn recip(&self) -> Self {
        match self {
            ExtComplex::Infinity => ExtComplex::Finite(Complex::new(0.0, 0.0)),
            ExtComplex::Finite(z) if z.norm_sqr() == 0.0 => ExtComplex::Infinity,
            ExtComplex::Finite(z) => ExtComplex::Finite(z.inv()),
        }
    }
}

impl From<Complex> for ExtComplex {
    fn from(z: Complex) -> Self {
        if z.is_finite() {
            ExtComplex::Finite(z)
        } else {
            ExtComplex::Infinity
        }
    }
}

/// Chordal (Riemann-sphere) distance; range [0, 2], finite at infinity.
pub fn chordal(a: ExtComplex, b: ExtComplex) -> f64 {
    match (a, b) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
        (ExtComplex::Finite(z), ExtComplex::Infinity)
        | (ExtComplex::Infinity, ExtComplex::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            // scale very large values through the inverse chart so the
            // norm_sqr products cannot overflow
            let big = 1e120;
            if z.norm() > big || w.norm() > big {
                let zi = ExtComplex::Finite(z).recip();
                let wi = ExtComplex::Finite(w).recip();
                return chordal(zi, wi);
            }
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
        }
    }
}

/// A point of the projective line: chart value plus a unit homogeneous lift.
#[derive(Debug, Clone, Copy)]
pub struct ProjPoint {
    chart: ExtComplex,
    /// unit-length representative (v1, v2) with chart = v2/v1
    hom: (Complex, Complex),
}

impl ProjPoint {
    pub fn from_chart(z: ExtComplex) -> Self {
        let hom = match z {
            ExtComplex::Infinity => (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)),
            ExtComplex::Finite(z) => {
                let norm = (1.0 + z.norm_sqr()).sqrt();
                if norm.is_finite() {
                    (Complex::new(1.0 / norm, 0.0), z / norm)
                } else {
                    (Complex::new(0.0, 0.0), Complex::new(1.0, 0.0))
                }
            }
        };
        Self { chart: z, hom }
    }

    /// From a homogeneous pair (not both zero).
    pub fn from_homogeneous(v1: Complex, v2: Complex) -> Self {
        let norm = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
        assert!(norm > 0.0, "homogeneous pair must be nonzero");
        let (v1, v2) = (v1 / norm, v2 / norm);
        // chart value v2/v1; declare infinity when v1 underflows entirely
        let chart = if v1.norm_sqr() == 0.0 {
            ExtComplex::Infinity
        } else {
            ExtComplex::Finite(v2 / v1)
        };
        Self { chart, hom: (v1, v2) }
    }

    pub fn chart(&self) -> ExtComplex {
        self.chart
    }

    pub fn homogeneous(&self) -> (Complex, Complex) {
        self.hom
    }

    pub fn dist(&self, other: &ProjPoint) -> f64 {
        chordal(self.chart, other.chart)
    }
}

/// Chart value of the kernel line of `m`, when the kernel is nontrivial.
/// Returns `None` for invertible (or identically zero) matrices.
pub fn kernel_point(m: &Mat2) -> Option<ProjPoint> {
    if m.is_zero() {
        return None;
    }
    if m.det().norm() > 0.0 {
        return None;
    }
    // rank one: kernel of [[a,b],[c,d]] is (v1,v2) with a v1 + b v2 = 0 and
    // c v1 + d v2 = 0; use the larger row for conditioning
    let (p, q) = if m.a.norm_sqr() + m.b.norm_sqr() >= m.c.norm_sqr() + m.d.norm_sqr() {
        (m.a, m.b)
    } else {
        (m.c, m.d)
    };
    if p.norm_sqr() == 0.0 && q.norm_sqr() == 0.0 {
        return None;
    }
    Some(ProjPoint::from_homogeneous(q, -p))
}

/// Action of a nonzero matrix on the projective line, in homogeneous form.
/// Errors with `KernelHit` when `z` lies in the kernel (chordal distance
/// below 1e-14).
pub fn proj_action(m: &Mat2, z: &ProjPoint) -> Result<ProjPoint> {
    if let Some(ker) = kernel_point(m) {
        if ker.dist(z) <= 1e-14 {
            return Err(Error::KernelHit);
        }
    }
    let (v1, v2) = z.homogeneous();
    let (w1, w2) = m.matvec((v1, v2));
    let norm = (w1.norm_sqr() + w2.norm_sqr()).sqrt();
    if norm == 0.0 {
        return Err(Error::KernelHit);
    }
    Ok(ProjPoint::from_homogeneous(w1, w2))
}

/// Mobius image in the chart: `[[a,b],[c,d]] . z = (c + d z)/(a + b z)`.
pub fn mobius_chart(m: &Mat2, z: ExtComplex) -> ExtComplex {
    match z {
        ExtComplex::Finite(z) => {
            let num = m.c + m.d * z;
            let den = m.a + m.b * z;
            div_ext(num, den)
        }
        ExtComplex::Infinity => div_ext(m.d, m.b),
    }
}

fn div_ext(num: Complex, den: Complex) -> ExtComplex {
    if den.norm_sqr() == 0.0 {
        if num.norm_sqr() == 0.0 {
            // kernel direction; callers guard against this
            ExtComplex::Infinity
        } else {
            ExtComplex::Infinity
        }
    } else {
        ExtComplex::Finite(num / den)
    }
}

/// Derivative of the chart-coordinate Mobius action at a finite `z`:
/// `det(m) / (a + b z)^2`. Errors with `ChartPole` at the pole of the map
/// (callers switch to the inverse chart there).
pub fn mobius_chart_derivative(m: &Mat2, z: Complex) -> Result<Complex> {
    let den = m.a + m.b * z;
    if den.norm_sqr() == 0.0 {
        return Err(Error::ChartPole);
    }
    Ok(m.det() / (den * den))
}
