//! Roots of complex-coefficient polynomials by the Durand-Kerner iteration
//! with Newton polishing. Degrees here are small (sampling functions are
//! short trigonometric polynomials), so simultaneous iteration is plenty.

use crate::error::{Error, Result};
use crate::Complex;

fn horner(coeffs: &[Complex], z: Complex) -> Complex {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_deriv(coeffs: &[Complex], z: Complex) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * (k as f64);
    }
    acc
}

/// All roots of `sum coeffs[k] z^k`, `coeffs` low-to-high with a nonzero
/// leading coefficient. Returns `degree` roots in a deterministic order
/// (sorted by real part, then imaginary part).
pub fn roots(coeffs: &[Complex]) -> Result<Vec<Complex>> {
    let mut c = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm_sqr() == 0.0 && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    let monic: Vec<Complex> = c.iter().map(|&a| a / lead).collect();

    if deg == 1 {
        return Ok(vec![-monic[0]]);
    }
    if deg == 2 {
        // quadratic formula with the stable sign choice
        let (b, a0) = (monic[1], monic[0]);
        let disc = (b * b - 4.0 * a0).sqrt();
        let q = if (b + disc).norm() >= (b - disc).norm() {
            -(b + disc) * 0.5
        } else {
            -(b - disc) * 0.5
        };
        let r1 = q;
        let r2 = if q.norm_sqr() > 0.0 {
            a0 / q
        } else {
            Complex::new(0.0, 0.0)
        };
        let mut rs = vec![r1, r2];
        sort_roots(&mut rs);
        return Ok(rs);
    }

    // Durand-Kerner from a deterministic spiral of initial guesses
    let radius = 1.0 + monic.iter().take(deg).map(|a| a.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64 + 0.7;
            Complex::from_polar(radius.powf(0.5 + 0.5 * (k as f64 + 1.0) / deg as f64), angle)
        })
        .collect();

    let scale = radius.max(1.0);
    let tol = 1e-14 * scale;
    let mut converged = false;
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..deg {
                if j != k {
                    let mut diff = z[k] - z[j];
                    if diff.norm_sqr() == 0.0 {
                        diff = Complex::new(1e-12 * scale, 1e-12 * scale);
                    }
                    denom *= diff;
                }
            }
            let step = horner(&monic, z[k]) / denom;
            z[k] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= tol {
            converged = true;
            break;
        }
    }

    // Newton polish; multiple roots keep their Durand-Kerner value
    for zk in z.iter_mut() {
        for _ in 0..4 {
            let d = horner_deriv(&monic, *zk);
            if d.norm_sqr() == 0.0 {
                break;
            }
            let step = horner(&monic, *zk) / d;
            if !step.is_finite() || step.norm() > 0.5 * scale {
                break;
            }
            *zk -= step;
        }
    }

    // residual acceptance: each root must nearly annihilate the polynomial
    let resid_tol = 1e-8 * scale.powi(deg.min(12) as i32).max(1.0);
    if !converged {
        for &zk in &z {
            if horner(&monic, zk).norm() > resid_tol {
                return Err(Error::RootsNonConvergence { degree: deg });
            }
        }
    }

    sort_roots(&mut z);
    Ok(z)
}

fn sort_roots(z: &mut [Complex]) {
    z.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}
