//! Quasi-periodic model data: sampling functions as trigonometric
//! polynomials on the d-torus, the translation dynamics `T x = x + alpha`,
//! and model-level integrals such as `∫ log|c| dμ`.
//!
//! Sampling functions are restricted to trigonometric polynomials on
//! purpose: evaluation is exact for the stored coefficient set, zeros are
//! algebraically locatable in one dimension, and `∫ log|c|` reduces to a
//! Mahler measure through Jensen's formula, which gives the Lyapunov
//! identity checks an exact offset term.

use crate::error::{Error, Result};
use crate::polyroots;
use crate::Complex;

const TAU: f64 = std::f64::consts::TAU;

/// Golden frequency `(sqrt 5 - 1)/2`, the default scan frequency.
pub const GOLDEN_MEAN: f64 = 0.6180339887498949;

/// Finitely supported Fourier series on the d-torus:
/// `p(x) = sum_k a_k exp(2 pi i k . x)`.
///
/// Canonical form: coefficients exactly equal to zero are dropped, terms are
/// sorted by frequency vector. Evaluation is 1-periodic in each coordinate by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    dim: usize,
    terms: Vec<(Vec<i64>, Complex)>,
}

impl TrigPoly {
    /// Build from (frequency vector, coefficient) pairs; duplicates are
    /// summed, zero coefficients dropped.
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, Complex)>) -> Result<Self> {
        let mut map: std::collections::BTreeMap<Vec<i64>, Complex> = Default::default();
        for (k, a) in terms {
            if k.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: k.len(),
                });
            }
            if !a.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "non-finite coefficient at k={k:?}"
                )));
            }
            *map.entry(k).or_insert_with(|| Complex::new(0.0, 0.0)) += a;
        }
        map.retain(|_, a| a.norm_sqr() != 0.0);
        Ok(Self {
            dim,
            terms: map.into_iter().collect(),
        })
    }

    pub fn constant(dim: usize, value: Complex) -> Self {
        Self::new(dim, [(vec![0; dim], value)]).expect("constant term is well-formed")
    }

    /// `amp * cos(2 pi x_0)` as the pair of conjugate coefficients.
    pub fn cosine(dim: usize, amp: f64) -> Self {
        let mut k = vec![0i64; dim];
        k[0] = 1;
        let mut mk = vec![0i64; dim];
        mk[0] = -1;
        let half = Complex::new(0.5 * amp, 0.0);
        Self::new(dim, [(k, half), (mk, half)]).expect("cosine terms are well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<i64>, Complex)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum_k a_k exp(2 pi i k . x)`; exact for the stored coefficient set.
    pub fn eval(&self, x: &[f64]) -> Result<Complex> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self.eval_at(x))
    }

    #[inline]
    pub(crate) fn eval_at(&self, x: &[f64]) -> Complex {
        debug_assert_eq!(x.len(), self.dim);
        let mut sum = Complex::new(0.0, 0.0);
        for (k, a) in &self.terms {
            let mut dot = 0.0;
            for (ki, xi) in k.iter().zip(x) {
                dot += *ki as f64 * xi;
            }
            let (s, c) = (TAU * dot).sin_cos();
            sum += a * Complex::new(c, s);
        }
        sum
    }

    /// Real part of the evaluation; exact value for Hermitian-symmetric
    /// coefficient sets (real-valued polynomials).
    #[inline]
    pub(crate) fn eval_real(&self, x: &[f64]) -> f64 {
        self.eval_at(x).re
    }

    /// Largest violation of `a(-k) = conj(a(k))`; zero for real-valued
    /// polynomials.
    pub fn hermitian_violation(&self) -> (f64, Option<Vec<i64>>) {
        let mut worst = 0.0;
        let mut at = None;
        for (k, a) in &self.terms {
            let mk: Vec<i64> = k.iter().map(|t| -t).collect();
            let mirrored = self
                .terms
                .binary_search_by(|(kk, _)| kk.cmp(&mk))
                .map(|i| self.terms[i].1)
                .unwrap_or_else(|_| Complex::new(0.0, 0.0));
            let v = (mirrored - a.conj()).norm();
            if v > worst {
                worst = v;
                at = Some(k.clone());
            }
        }
        (worst, at)
    }

    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.hermitian_violation().0 <= tol
    }

    /// Sup of |p| over the torus, by dense sampling. Accurate to grid
    /// resolution squared, which is far below every tolerance that consumes
    /// this value (sampling degrees here are tiny).
    pub fn sup_abs(&self) -> f64 {
        let per_dim: usize = match self.dim {
            1 => 1 << 14,
            2 => 1 << 9,
            _ => 64,
        };
        let mut sup = 0.0f64;
        let mut idx = vec![0usize; self.dim];
        let mut x = vec![0.0f64; self.dim];
        loop {
            for (xi, &i) in x.iter_mut().zip(idx.iter()) {
                *xi = i as f64 / per_dim as f64;
            }
            sup = sup.max(self.eval_at(&x).norm());
            // odometer
            let mut d = 0;
            loop {
                if d == self.dim {
                    return sup;
                }
                idx[d] += 1;
                if idx[d] < per_dim {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    /// d=1 only: the associated Laurent coefficients as an ordinary
    /// polynomial in `z = exp(2 pi i x)`, low-to-high, plus the lowest
    /// exponent.
    fn laurent(&self) -> Option<(Vec<Complex>, i64)> {
        if self.dim != 1 || self.terms.is_empty() {
            return None;
        }
        let kmin = self.terms.first().map(|(k, _)| k[0]).unwrap();
        let kmax = self.terms.last().map(|(k, _)| k[0]).unwrap();
        let mut coeffs = vec![Complex::new(0.0, 0.0); (kmax - kmin + 1) as usize];
        for (k, a) in &self.terms {
            coeffs[(k[0] - kmin) as usize] = *a;
        }
        Some((coeffs, kmin))
    }

    /// d=1 only: zeros of `p` on the torus, as points in [0, 1), from the
    /// unit-circle roots of the Laurent polynomial.
    pub fn torus_zeros(&self) -> Result<Vec<f64>> {
        if self.dim != 1 {
            return Err(Error::DimensionUnsupported {
                what: "torus_zeros",
                required: 1,
                got: self.dim,
            });
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (coeffs, _) = self.laurent().expect("dim checked");
        let mut zeros: Vec<f64> = polyroots::roots(&coeffs)?
            .into_iter()
            .filter(|r| (r.norm() - 1.0).abs() < 1e-8)
            .map(|r| (r.arg() / TAU).rem_euclid(1.0))
            .collect();
        zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(zeros)
    }
}

/// How to evaluate `∫ log|p| dμ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanLogMethod {
    /// Exact in d=1 through Jensen's formula: the log Mahler measure of the
    /// associated Laurent polynomial.
    Roots,
    /// Adaptive sampling with refinement near zeros of `p`; the only route
    /// for d >= 2.
    Quadrature,
}

/// `∫_{T^d} log|p(x)| dμ(x)`.
pub fn mean_log_abs(p: &TrigPoly, method: MeanLogMethod) -> Result<f64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match method {
        MeanLogMethod::Roots => {
            if p.dim() != 1 {
                return Err(Error::DimensionUnsupported {
                    what: "mean_log_abs(roots)",
                    required: 1,
                    got: p.dim(),
                });
            }
            let (coeffs, _) = p.laurent().expect("dim checked");
            let lead = *coeffs.last().expect("nonzero poly");
            // log Mahler measure: |z^kmin| = 1 on the circle, so only the
            // polynomial part contributes
            let roots = polyroots::roots(&coeffs)?;
            let mut acc = lead.norm().ln();
            for r in roots {
                let n = r.norm();
                if n > 1.0 {
                    acc += n.ln();
                }
            }
            Ok(acc)
        }
        MeanLogMethod::Quadrature => {
            if p.dim() == 1 {
                quadrature_log_1d(p)
            } else {
                quadrature_log_nd(p)
            }
        }
    }
}

/// Floor for log|p| at numerically-zero values; the adaptive splitter keeps
/// the affected panels so small that the clamp error is below 1e-10.
const LOG_FLOOR: f64 = -746.0;

fn log_abs_eval(p: &TrigPoly, x: f64) -> f64 {
    let v = p.eval_at(&[x]).norm().ln();
    if v.is_finite() {
        v
    } else {
        LOG_FLOOR
    }
}

// 16-point Gauss-Legendre nodes (positive half) and weights.
const GL16_NODES: [f64; 8] = [
    0.095012509837637440185,
    0.281603550779258913230,
    0.458016777657227386342,
    0.617876244402643748447,
    0.755404408355003033895,
    0.865631202387831743880,
    0.944575023073232576078,
    0.989400934991649932596,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.189450610455068496285,
    0.182603415044923588867,
    0.169156519395002538189,
    0.149595988816576732081,
    0.124628971255533872052,
    0.095158511682492784810,
    0.062253523938647892863,
    0.027152459411754094852,
];

fn gl16(p: &TrigPoly, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in GL16_NODES.iter().zip(GL16_WEIGHTS.iter()) {
        acc += w * (log_abs_eval(p, mid - half * x) + log_abs_eval(p, mid + half * x));
    }
    acc * half
}

fn quadrature_log_1d(p: &TrigPoly) -> Result<f64> {
    let rel_tol = 3e-10;
    let min_width = 1e-14;
    let mut total = 0.0f64;
    let mut capped_whole = 0.0f64;
    let mut capped_split = 0.0f64;
    let mut stack: Vec<(f64, f64, f64)> = Vec::new();
    let initial = 16;
    for i in 0..initial {
        let a = i as f64 / initial as f64;
        let b = (i + 1) as f64 / initial as f64;
        stack.push((a, b, gl16(p, a, b)));
    }
    while let Some((a, b, whole)) = stack.pop() {
        let m = 0.5 * (a + b);
        let left = gl16(p, a, m);
        let right = gl16(p, m, b);
        let diff = (whole - left - right).abs();
        if diff <= rel_tol * (b - a).max(1e-6) {
            total += left + right;
        } else if b - a < min_width {
            // log-integrable singularity squeezed below resolvable width;
            // its possible contribution is O(width |log width|)
            total += left + right;
            capped_whole += whole;
            capped_split += left + right;
        } else {
            stack.push((a, m, left));
            stack.push((m, b, right));
        }
    }
    let unresolved = (capped_whole - capped_split).abs();
    if unresolved > 1e-7 {
        return Err(Error::QuadratureNonConvergence {
            previous: total - capped_split + capped_whole,
            last: total,
        });
    }
    Ok(total)
}

fn quadrature_log_nd(p: &TrigPoly) -> Result<f64> {
    let d = p.dim();
    let tol = 1e-6;
    let max_total: usize = 1 << 24;
    let mut per_dim: usize = 64;
    let mut prev: Option<f64> = None;
    loop {
        let mut acc = 0.0f64;
        let mut idx = vec![0usize; d];
        let mut x = vec![0.0f64; d];
        'grid: loop {
            for (xi, &i) in x.iter_mut().zip(idx.iter()) {
                *xi = (i as f64 + 0.5) / per_dim as f64;
            }
            let v = p.eval_at(&x).norm().ln();
            acc += if v.is_finite() { v } else { LOG_FLOOR };
            let mut dd = 0;
            loop {
                if dd == d {
                    break 'grid;
                }
                idx[dd] += 1;
                if idx[dd] < per_dim {
                    break;
                }
                idx[dd] = 0;
                dd += 1;
            }
        }
        let estimate = acc / (per_dim as f64).powi(d as i32);
        if let Some(q) = prev {
            if (estimate - q).abs() <= tol * (1.0 + estimate.abs()) {
                return Ok(estimate);
            }
            if (per_dim * 2).pow(d as u32) as usize > max_total {
                return Err(Error::QuadratureNonConvergence {
                    previous: q,
                    last: estimate,
                });
            }
        }
        prev = Some(estimate);
        per_dim *= 2;
    }
}

/// The quasi-periodic Jacobi operator family: frequency vector `alpha`,
/// off-diagonal sampling function `c` (complex, not identically zero),
/// diagonal sampling function `v` (real-valued).
#[derive(Debug, Clone)]
pub struct JacobiModel {
    alpha: Vec<f64>,
    c: TrigPoly,
    v: TrigPoly,
    label: String,
    c_sup: f64,
    v_sup: f64,
    c_zeros: Vec<f64>,
}

impl JacobiModel {
    pub fn new(alpha: Vec<f64>, c: TrigPoly, v: TrigPoly, label: impl Into<String>) -> Result<Self> {
        if alpha.is_empty() || alpha.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidConfig("alpha must be nonempty and finite".into()));
        }
        let dim = alpha.len();
        if c.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: c.dim() });
        }
        if v.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.dim() });
        }
        if c.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (violation, at) = v.hermitian_violation();
        let v_scale = v
            .terms()
            .iter()
            .map(|(_, a)| a.norm())
            .fold(0.0f64, f64::max)
            .max(1.0);
        if violation > 1e-12 * v_scale {
            return Err(Error::NonHermitian {
                k: at.unwrap_or_default(),
                violation,
            });
        }
        let alpha: Vec<f64> = alpha.into_iter().map(|a| a.rem_euclid(1.0)).collect();
        let c_sup = c.sup_abs();
        let v_sup = v.sup_abs();
        let c_zeros = if dim == 1 { c.torus_zeros().unwrap_or_default() } else { Vec::new() };
        Ok(Self {
            alpha,
            c,
            v,
            label: label.into(),
            c_sup,
            v_sup,
            c_zeros,
        })
    }

    /// `c ≡ 1, v ≡ 0` — the discrete free Laplacian; spectrum [-2, 2].
    pub fn free(alpha: &[f64]) -> Result<Self> {
        let dim = alpha.len();
        JacobiModel::new(
            alpha.to_vec(),
            TrigPoly::constant(dim, Complex::new(1.0, 0.0)),
            TrigPoly::new(dim, [])?,
            "free",
        )
    }

    /// `c ≡ 1, v = 2 lambda cos(2 pi x)` — the almost Mathieu operator.
    pub fn almost_mathieu(lambda: f64, alpha: &[f64]) -> Result<Self> {
        let dim = alpha.len();
        JacobiModel::new(
            alpha.to_vec(),
            TrigPoly::constant(dim, Complex::new(1.0, 0.0)),
            TrigPoly::cosine(dim, 2.0 * lambda),
            format!("amo(lambda={lambda})"),
        )
    }

    /// `c = 1 + exp(2 pi i x), v = 2 lambda cos(2 pi x)` — a singular model:
    /// `c` vanishes at x = 1/2, so the cocycle matrices drop rank on a
    /// circle of phases.
    pub fn singular_harper(lambda: f64, alpha: &[f64]) -> Result<Self> {
        let dim = alpha.len();
        let mut k1 = vec![0i64; dim];
        k1[0] = 1;
        let c = TrigPoly::new(
            dim,
            [
                (vec![0; dim], Complex::new(1.0, 0.0)),
                (k1, Complex::new(1.0, 0.0)),
            ],
        )?;
        JacobiModel::new(
            alpha.to_vec(),
            c,
            TrigPoly::cosine(dim, 2.0 * lambda),
            format!("singular-harper(lambda={lambda})"),
        )
    }

    /// Preset lookup by name, as exposed on the command line.
    pub fn preset(name: &str, lambda: f64, alpha: &[f64]) -> Result<Self> {
        match name {
            "free" => Self::free(alpha),
            "amo" | "almost-mathieu" => Self::almost_mathieu(lambda, alpha),
            "singular-harper" => Self::singular_harper(lambda, alpha),
            other => Err(Error::InvalidConfig(format!(
                "unknown preset '{other}' (expected free | amo | singular-harper)"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn c(&self) -> &TrigPoly {
        &self.c
    }

    pub fn v(&self) -> &TrigPoly {
        &self.v
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn c_sup(&self) -> f64 {
        self.c_sup
    }

    pub fn v_sup(&self) -> f64 {
        self.v_sup
    }

    /// d=1: torus points where c vanishes (empty for d >= 2, where zero sets
    /// are curves and callers fall back to value thresholds).
    pub fn c_zeros(&self) -> &[f64] {
        &self.c_zeros
    }

    /// `2 ||c||_inf + ||v||_inf` — a bound on the operator norm, hence on
    /// |E| over the spectrum.
    pub fn operator_bound(&self) -> f64 {
        2.0 * self.c_sup + self.v_sup
    }

    /// `x + n alpha mod 1`, coordinate-wise. The n-fold product is formed
    /// with a compensated multiply so a single n-step jump agrees with n
    /// repeated single steps to working precision.
    pub fn translate(&self, x: &[f64], n: i64) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "phase dimension mismatch");
        let nf = n as f64;
        x.iter()
            .zip(&self.alpha)
            .map(|(&xi, &ai)| {
                let p = nf * ai;
                let err = nf.mul_add(ai, -p);
                (p.rem_euclid(1.0) + err + xi).rem_euclid(1.0)
            })
            .collect()
    }

    /// One forward translation step, in place.
    #[inline]
    pub(crate) fn step_forward(&self, x: &mut [f64]) {
        for (xi, &ai) in x.iter_mut().zip(&self.alpha) {
            *xi = (*xi + ai).rem_euclid(1.0);
        }
    }

    #[inline]
    pub(crate) fn step_backward(&self, x: &mut [f64]) {
        for (xi, &ai) in x.iter_mut().zip(&self.alpha) {
            *xi = (*xi - ai).rem_euclid(1.0);
        }
    }

    pub fn eval_c(&self, x: &[f64]) -> Complex {
        self.c.eval_at(x)
    }

    pub fn eval_v(&self, x: &[f64]) -> f64 {
        self.v.eval_real(x)
    }

    /// `∫ log|c| dμ`: exact root route for d = 1, quadrature otherwise.
    pub fn mean_log_c(&self) -> Result<f64> {
        if self.dim() == 1 {
            mean_log_abs(&self.c, MeanLogMethod::Roots)
        } else {
            mean_log_abs(&self.c, MeanLogMethod::Quadrature)
        }
    }

    /// Heuristic rational-independence check on (1, alpha): continued
    /// fractions per coordinate up to the denominator bound, plus a small
    /// integer-relation box across coordinates. Violations are warnings, not
    /// errors — full verification is undecidable for floating-point input.
    pub fn independence_warnings(&self, denominator_bound: u64) -> Vec<String> {
        let mut warnings = Vec::new();
        for (i, &a) in self.alpha.iter().enumerate() {
            if let Some((p, q)) = rational_approx(a, denominator_bound, 1e-12) {
                warnings.push(format!(
                    "alpha[{i}] = {a} is within 1e-12/q of the rational {p}/{q}"
                ));
            }
        }
        if self.dim() >= 2 && self.dim() <= 3 {
            let k_bound = 20i64;
            let d = self.dim();
            let mut k = vec![-k_bound; d];
            'outer: loop {
                if k.iter().any(|&t| t != 0) {
                    let dot: f64 = k.iter().zip(&self.alpha).map(|(&ki, &ai)| ki as f64 * ai).sum();
                    if (dot - dot.round()).abs() < 1e-9 {
                        warnings.push(format!("integer relation k = {k:?} with k . alpha ~ integer"));
                    }
                }
                let mut dd = 0;
                loop {
                    if dd == d {
                        break 'outer;
                    }
                    k[dd] += 1;
                    if k[dd] <= k_bound {
                        break;
                    }
                    k[dd] = -k_bound;
                    dd += 1;
                }
            }
        }
        warnings
    }
}

/// Best rational approximation p/q with q <= bound and |a - p/q| < tol/q,
/// via the continued fraction expansion.
fn rational_approx(a: f64, bound: u64, tol: f64) -> Option<(i64, u64)> {
    let mut x = a;
    let (mut p0, mut q0, mut p1, mut q1): (i64, u64, i64, u64) = (1, 0, x.floor() as i64, 1);
    for _ in 0..64 {
        if q1 > bound {
            return None;
        }
        let approx = p1 as f64 / q1 as f64;
        if (a - approx).abs() < tol / q1 as f64 {
            return Some((p1, q1));
        }
        let frac = x - x.floor();
        if frac.abs() < 1e-15 {
            return None;
        }
        x = 1.0 / frac;
        let digit = x.floor();
        if !(0.0..9e15).contains(&digit) {
            return None;
        }
        let d = digit as i64;
        let p2 = d * p1 + p0;
        let q2 = (d as u64).saturating_mul(q1).saturating_add(q0);
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}

/// Where sup-estimates and μ-integrals are sampled: either a uniform grid
/// (the numerical stand-in for `sup over x`) or a single orbit segment.
#[derive(Debug, Clone, PartialEq)]
pub enum GridKind {
    Uniform { per_dim: usize },
    Orbit { base: Vec<f64>, len: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    points: Vec<Vec<f64>>,
    kind: GridKind,
}

impl PhaseGrid {
    /// Equispaced tensor grid `i / P` per coordinate, lexicographic order.
    pub fn uniform(dim: usize, per_dim: usize) -> Result<Self> {
        if per_dim == 0 {
            return Err(Error::InvalidConfig("grid needs at least one point".into()));
        }
        let total = per_dim.checked_pow(dim as u32).ok_or_else(|| {
            Error::InvalidConfig("grid too large".into())
        })?;
        let mut points = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        loop {
            points.push(idx.iter().map(|&i| i as f64 / per_dim as f64).collect());
            let mut d = 0;
            loop {
                if d == dim {
                    return Ok(Self {
                        points,
                        kind: GridKind::Uniform { per_dim },
                    });
                }
                idx[d] += 1;
                if idx[d] < per_dim {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
    }

    /// The orbit segment `x0, T x0, ..., T^{n-1} x0`.
    pub fn orbit(model: &JacobiModel, x0: &[f64], len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidConfig("orbit needs at least one point".into()));
        }
        if x0.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                got: x0.len(),
            });
        }
        let base: Vec<f64> = x0.iter().map(|t| t.rem_euclid(1.0)).collect();
        let mut points = Vec::with_capacity(len);
        let mut x = base.clone();
        for _ in 0..len {
            points.push(x.clone());
            model.step_forward(&mut x);
        }
        Ok(Self {
            points,
            kind: GridKind::Orbit { base, len },
        })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use approx::assert_abs_diff_eq;

    fn one(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn eval_constants_and_exponentials() {
        // constant 1 at any point
        let p = TrigPoly::constant(1, one(1.0, 0.0));
        assert_abs_diff_eq!(p.eval(&[0.37]).unwrap().re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.eval(&[0.37]).unwrap().im, 0.0, epsilon = 1e-15);

        // 2 cos(2 pi x) at x = 0 is 2
        let p = TrigPoly::new(1, [(vec![1], one(1.0, 0.0)), (vec![-1], one(1.0, 0.0))]).unwrap();
        let v = p.eval(&[0.0]).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);

        // 1 + e^{2 pi i x} at x = 1/2 is 0
        let p = TrigPoly::new(1, [(vec![0], one(1.0, 0.0)), (vec![1], one(1.0, 0.0))]).unwrap();
        let v = p.eval(&[0.5]).unwrap();
        assert!(v.norm() < 1e-15);

        // dimension mismatch is a usage error
        assert!(matches!(
            p.eval(&[0.1, 0.2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn hermitian_polynomials_evaluate_real() {
        let mut rng = SplitMix64::new(4);
        for _ in 0..20 {
            // random Hermitian-symmetric coefficient set
            let mut terms = vec![(vec![0i64], one(rng.next_in(-1.0, 1.0), 0.0))];
            for k in 1..=3i64 {
                let a = one(rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0));
                terms.push((vec![k], a));
                terms.push((vec![-k], a.conj()));
            }
            let p = TrigPoly::new(1, terms).unwrap();
            assert!(p.is_real_valued(1e-14));
            for _ in 0..50 {
                let x = rng.next_f64();
                assert!(p.eval(&[x]).unwrap().im.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn translate_mod_one() {
        let m = JacobiModel::free(&[0.25]).unwrap();
        let y = m.translate(&[0.9], 1);
        assert_abs_diff_eq!(y[0], 0.15, epsilon = 1e-15);
        let y = m.translate(&[0.42], 0);
        assert_abs_diff_eq!(y[0], 0.42, epsilon = 1e-15);

        let g = JacobiModel::free(&[GOLDEN_MEAN]).unwrap();
        let y = g.translate(&[0.0], 2);
        assert_abs_diff_eq!(y[0], 2.0 * GOLDEN_MEAN - 1.0, epsilon = 1e-14);
    }

    #[test]
    fn translate_additivity() {
        let m = JacobiModel::free(&[GOLDEN_MEAN, 0.3183098861837907]).unwrap();
        let mut rng = SplitMix64::new(8);
        for _ in 0..200 {
            let x = [rng.next_f64(), rng.next_f64()];
            let a = (rng.next_f64() * 2000.0 - 1000.0) as i64;
            let b = (rng.next_f64() * 2000.0 - 1000.0) as i64;
            let lhs = m.translate(&x, a + b);
            let via = m.translate(&m.translate(&x, a), b);
            for (l, r) in lhs.iter().zip(via.iter()) {
                let d = (l - r).abs();
                let d = d.min(1.0 - d); // torus distance
                assert!(d <= 1e-12, "additivity violated by {d}");
            }
        }
    }

    #[test]
    fn mean_log_constants() {
        let p = TrigPoly::constant(1, one(1.0, 0.0));
        assert_abs_diff_eq!(mean_log_abs(&p, MeanLogMethod::Roots).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            mean_log_abs(&p, MeanLogMethod::Quadrature).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    // Mahler-measure oracle: for p = a + z with |a| <= 1 the measure is 1
    // (root on or outside... root is -a, inside the disk), for |a| > 1 it is |a|.
    #[test]
    fn mean_log_via_single_root() {
        let p = TrigPoly::new(1, [(vec![0], one(1.0, 0.0)), (vec![1], one(1.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(mean_log_abs(&p, MeanLogMethod::Roots).unwrap(), 0.0, epsilon = 1e-14);

        let p = TrigPoly::new(1, [(vec![0], one(2.0, 0.0)), (vec![1], one(1.0, 0.0))]).unwrap();
        assert_abs_diff_eq!(
            mean_log_abs(&p, MeanLogMethod::Roots).unwrap(),
            2.0f64.ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn zero_polynomial_is_a_domain_error() {
        let p = TrigPoly::new(1, []).unwrap();
        assert!(matches!(
            mean_log_abs(&p, MeanLogMethod::Roots),
            Err(Error::ZeroPolynomial)
        ));
    }

    // the two routes agree, including for polynomials with simple zeros ON
    // the unit circle (the singular case)
    #[test]
    fn roots_and_quadrature_agree() {
        let cases: Vec<TrigPoly> = vec![
            TrigPoly::new(1, [(vec![0], one(1.0, 0.0)), (vec![1], one(1.0, 0.0))]).unwrap(),
            TrigPoly::new(1, [(vec![0], one(2.0, 0.0)), (vec![1], one(1.0, 0.0))]).unwrap(),
            TrigPoly::new(1, [(vec![-1], one(1.0, 0.0)), (vec![1], one(1.0, 0.0))]).unwrap(),
            TrigPoly::new(
                1,
                [
                    (vec![-1], one(0.3, -0.2)),
                    (vec![0], one(0.8, 0.1)),
                    (vec![2], one(1.0, 0.4)),
                ],
            )
            .unwrap(),
        ];
        for p in cases {
            let r = mean_log_abs(&p, MeanLogMethod::Roots).unwrap();
            let q = mean_log_abs(&p, MeanLogMethod::Quadrature).unwrap();
            assert_abs_diff_eq!(r, q, epsilon = 1e-6);
        }
    }

    #[test]
    fn roots_and_quadrature_agree_on_random_polys() {
        let mut rng = SplitMix64::new(99);
        let mut done = 0;
        while done < 25 {
            let deg = 1 + (rng.next_u64() % 4) as i64;
            let mut terms = Vec::new();
            for k in -1..=deg {
                terms.push((
                    vec![k],
                    one(rng.next_in(-1.0, 1.0), rng.next_in(-1.0, 1.0)),
                ));
            }
            let p = TrigPoly::new(1, terms).unwrap();
            if p.is_zero() {
                continue;
            }
            let r = match mean_log_abs(&p, MeanLogMethod::Roots) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let q = mean_log_abs(&p, MeanLogMethod::Quadrature).unwrap();
            assert_abs_diff_eq!(r, q, epsilon = 1e-6);
            done += 1;
        }
    }

    #[test]
    fn quadrature_two_dimensional() {
        // p(x, y) = (2 + e^{2 pi i x}): integral is log 2 independent of y
        let p = TrigPoly::new(
            2,
            [
                (vec![0, 0], one(2.0, 0.0)),
                (vec![1, 0], one(1.0, 0.0)),
            ],
        )
        .unwrap();
        let q = mean_log_abs(&p, MeanLogMethod::Quadrature).unwrap();
        assert_abs_diff_eq!(q, 2.0f64.ln(), epsilon = 1e-5);
        // and the root route refuses d >= 2
        assert!(matches!(
            mean_log_abs(&p, MeanLogMethod::Roots),
            Err(Error::DimensionUnsupported { .. })
        ));
    }

    #[test]
    fn model_validation() {
        // v with a non-Hermitian coefficient is rejected, naming the k
        let bad_v = TrigPoly::new(1, [(vec![1], one(1.0, 0.5))]).unwrap();
        let c = TrigPoly::constant(1, one(1.0, 0.0));
        let err = JacobiModel::new(vec![GOLDEN_MEAN], c.clone(), bad_v, "bad").unwrap_err();
        assert!(matches!(err, Error::NonHermitian { .. }));

        // identically-zero c is rejected
        let zero = TrigPoly::new(1, []).unwrap();
        let v = TrigPoly::new(1, []).unwrap();
        assert!(matches!(
            JacobiModel::new(vec![GOLDEN_MEAN], zero, v, "bad"),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn preset_shapes() {
        let free = JacobiModel::free(&[GOLDEN_MEAN]).unwrap();
        assert_abs_diff_eq!(free.c_sup(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(free.v_sup(), 0.0, epsilon = 1e-12);
        assert!(free.c_zeros().is_empty());
        assert_abs_diff_eq!(free.operator_bound(), 2.0, epsilon = 1e-12);

        let amo = JacobiModel::almost_mathieu(0.5, &[GOLDEN_MEAN]).unwrap();
        assert_abs_diff_eq!(amo.v_sup(), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(amo.eval_v(&[0.0]), 1.0, epsilon = 1e-14);

        // singular-harper: c has exactly one zero, at x = 1/2
        let sh = JacobiModel::singular_harper(0.5, &[GOLDEN_MEAN]).unwrap();
        assert_eq!(sh.c_zeros().len(), 1);
        assert_abs_diff_eq!(sh.c_zeros()[0], 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(sh.c_sup(), 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(sh.mean_log_c().unwrap(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn rational_alpha_warns() {
        let m = JacobiModel::free(&[0.25]).unwrap();
        assert!(!m.independence_warnings(1_000_000).is_empty());
        let g = JacobiModel::free(&[GOLDEN_MEAN]).unwrap();
        assert!(g.independence_warnings(1_000_000).is_empty());
    }

    #[test]
    fn grids() {
        let g = PhaseGrid::uniform(1, 2048).unwrap();
        assert_eq!(g.len(), 2048);
        assert_abs_diff_eq!(g.points()[1024][0], 0.5, epsilon = 0.0);
        assert!(g.points().iter().all(|p| (0.0..1.0).contains(&p[0])));

        let m = JacobiModel::free(&[GOLDEN_MEAN]).unwrap();
        let o = PhaseGrid::orbit(&m, &[0.0], 5).unwrap();
        assert_eq!(o.len(), 5);
        assert_abs_diff_eq!(o.points()[2][0], 2.0 * GOLDEN_MEAN - 1.0, epsilon = 1e-12);
    }
}
