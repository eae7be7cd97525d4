//! Jacobi cocycles at a fixed energy.
//!
//! Four matrix families are in play, all singular precisely where `c`
//! vanishes:
//!
//! ```text
//! A^E(x)  = [[E - v(x), -conj(c(T^-1 x))], [c(x), 0]]
//! Ã^E(x)  = [[E - v(x), -|c(T^-1 x)|^2 ], [1,    0]]
//! B^E(x)  = A^E(x) / c(x)
//! B̃^E(x)  = Ã^E(x) / c(T^-1 x)
//! ```
//!
//! `A` and `Ã` are continuous everywhere; the transfer matrices `B`, `B̃`
//! exist only off the orbit of the zero set of `c`. The families are linked
//! by the measurable conjugacy `M(Tx)^-1 Ã M(x) = A` with
//! `M = diag(1, 1/c(T^-1 x))`, and their top Lyapunov exponents satisfy
//! `L(A) = L(Ã)` and `L(B) = L(A) - ∫ log|c| dμ`. Those identities are
//! verified numerically here and used as estimator cross-checks everywhere
//! else.
//!
//! Products are renormalized after every factor, so iteration cannot
//! overflow for large |E| or underflow at nearly singular phases.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::model::JacobiModel;
use crate::parallel;
use crate::rng::SplitMix64;
use crate::Complex;

/// Which of the four cocycle matrix families to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CocycleKind {
    A,
    ATilde,
    B,
    BTilde,
}

impl CocycleKind {
    pub fn is_transfer(self) -> bool {
        matches!(self, CocycleKind::B | CocycleKind::BTilde)
    }

    pub fn name(self) -> &'static str {
        match self {
            CocycleKind::A => "A",
            CocycleKind::ATilde => "A~",
            CocycleKind::B => "B",
            CocycleKind::BTilde => "B~",
        }
    }
}

/// Torus distance within which an orbit point counts as sitting on a zero
/// of `c`; B-kind iterations reject such orbits deterministically.
pub const SINGULAR_EXCLUSION_RADIUS: f64 = 1e-9;

fn torus_dist_1d(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Whether a phase is too close to the zero set of `c` for the transfer
/// matrices to make sense there.
fn near_singular(model: &JacobiModel, x: &[f64], cabs: f64) -> bool {
    if model.dim() == 1 && !model.c_zeros().is_empty() {
        model
            .c_zeros()
            .iter()
            .any(|&z| torus_dist_1d(x[0], z) < SINGULAR_EXCLUSION_RADIUS)
    } else {
        cabs <= 1e-9 * model.c_sup().max(f64::MIN_POSITIVE)
    }
}

/// The cocycle matrix of the requested family at phase `x`, exactly as
/// displayed in the module docs.
pub fn cocycle_matrix(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: &[f64],
) -> Result<Mat2> {
    let x_prev = model.translate(x, -1);
    let c_here = model.eval_c(x);
    let c_prev = model.eval_c(&x_prev);
    let v_here = model.eval_v(x);
    build_matrix(model, kind, energy, x, c_here, c_prev, v_here, 0)
}

#[allow(clippy::too_many_arguments)]
fn build_matrix(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: &[f64],
    c_here: Complex,
    c_prev: Complex,
    v_here: f64,
    site: i64,
) -> Result<Mat2> {
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let ev = energy - v_here;
    match kind {
        CocycleKind::A => Ok(Mat2::new(ev, -c_prev.conj(), c_here, zero)),
        CocycleKind::ATilde => Ok(Mat2::new(
            ev,
            Complex::new(-c_prev.norm_sqr(), 0.0),
            one,
            zero,
        )),
        CocycleKind::B => {
            if near_singular(model, x, c_here.norm()) {
                return Err(Error::SingularPhase {
                    site,
                    phase: x.to_vec(),
                    cabs: c_here.norm(),
                });
            }
            let inv = c_here.inv();
            Ok(Mat2::new(ev * inv, -c_prev.conj() * inv, one, zero))
        }
        CocycleKind::BTilde => {
            let x_prev = model.translate(x, -1);
            if near_singular(model, &x_prev, c_prev.norm()) {
                return Err(Error::SingularPhase {
                    site: site - 1,
                    phase: x_prev,
                    cabs: c_prev.norm(),
                });
            }
            let inv = c_prev.inv();
            Ok(Mat2::new(
                ev * inv,
                Complex::new(-c_prev.norm_sqr(), 0.0) * inv,
                inv,
                zero,
            ))
        }
    }
}

/// Streams `D(x), D(Tx), D(T^2 x), ...` while reusing the previous-site
/// `c` evaluation.
pub(crate) struct OrbitCocycle<'a> {
    model: &'a JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: Vec<f64>,
    c_prev: Complex,
    site: i64,
}

impl<'a> OrbitCocycle<'a> {
    pub fn new(model: &'a JacobiModel, kind: CocycleKind, energy: Complex, x0: &[f64]) -> Self {
        assert_eq!(x0.len(), model.dim(), "phase dimension mismatch");
        let x: Vec<f64> = x0.iter().map(|t| t.rem_euclid(1.0)).collect();
        let x_prev = model.translate(&x, -1);
        let c_prev = model.eval_c(&x_prev);
        Self {
            model,
            kind,
            energy,
            x,
            c_prev,
            site: 0,
        }
    }

    /// Matrix at the current site, advancing the orbit by one step.
    pub fn next_matrix(&mut self) -> Result<Mat2> {
        let c_here = self.model.eval_c(&self.x);
        let v_here = self.model.eval_v(&self.x);
        let m = build_matrix(
            self.model,
            self.kind,
            self.energy,
            &self.x,
            c_here,
            self.c_prev,
            v_here,
            self.site,
        )?;
        self.c_prev = c_here;
        self.model.step_forward(&mut self.x);
        self.site += 1;
        Ok(m)
    }
}

/// `n`-step product `D_n(x) = D(T^{n-1}x) ... D(x)`, renormalized after
/// every factor. Returns `(P, s)` with `D_n(x) = e^s P` and `||P|| = 1`
/// in operator norm; an exactly-zero product returns `P = 0, s = -inf`.
pub fn iterate(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: &[f64],
    n: usize,
) -> Result<(Mat2, f64)> {
    assert!(n >= 1, "iterate needs n >= 1");
    let mut orbit = OrbitCocycle::new(model, kind, energy, x);
    let mut p = Mat2::identity();
    let mut log_norm = 0.0f64;
    for _ in 0..n {
        let d = orbit.next_matrix()?;
        p = d * p;
        let norm = p.op_norm();
        if norm == 0.0 {
            return Ok((Mat2::zero(), f64::NEG_INFINITY));
        }
        log_norm += norm.ln();
        p = p.scale(Complex::new(1.0 / norm, 0.0));
    }
    Ok((p, log_norm))
}

/// Lyapunov exponent estimate in nats per step.
#[derive(Debug, Clone, Copy)]
pub struct LEEstimate {
    pub value: f64,
    pub n_steps: usize,
    /// value of the estimator at n/2 steps; |value - half_value| is the
    /// convergence diagnostic
    pub half_value: f64,
    pub phase_count: usize,
}

impl LEEstimate {
    pub fn converged(&self, tol: f64) -> bool {
        (self.value - self.half_value).abs() <= tol
    }
}

/// How orbits are selected for the Lyapunov estimator.
#[derive(Debug, Clone)]
pub enum LyapunovScheme {
    /// A single orbit from a fixed starting phase.
    Orbit { x0: Vec<f64>, n: usize },
    /// Average over deterministically seeded starting phases. Unique
    /// ergodicity makes single orbits sufficient; averaging reduces the
    /// variance of the finite-n estimate.
    PhaseAvg { phases: usize, n: usize, seed: u64 },
}

impl LyapunovScheme {
    /// Default estimator: 8 phases, 1e5 steps.
    pub fn default_avg(seed: u64) -> Self {
        LyapunovScheme::PhaseAvg {
            phases: 8,
            n: 100_000,
            seed,
        }
    }
}

fn orbit_log_norms(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x0: &[f64],
    n: usize,
) -> Result<(f64, f64)> {
    let mut orbit = OrbitCocycle::new(model, kind, energy, x0);
    let mut p = Mat2::identity();
    let mut acc = 0.0f64;
    let mut half = 0.0f64;
    for j in 0..n {
        let d = orbit.next_matrix()?;
        p = d * p;
        let norm = p.op_norm();
        if norm == 0.0 {
            return Err(Error::SingularPhase {
                site: j as i64,
                phase: x0.to_vec(),
                cabs: 0.0,
            });
        }
        acc += norm.ln();
        p = p.scale(Complex::new(1.0 / norm, 0.0));
        if j + 1 == n / 2 {
            half = acc;
        }
    }
    Ok((half, acc))
}

/// Top Lyapunov exponent of `(T, D)` for the chosen family.
///
/// For B-kinds, starting phases whose orbit segment passes within the
/// singular-phase exclusion radius of a zero of `c` are rejected and the
/// next deterministic candidate is tried.
pub fn lyapunov(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    scheme: &LyapunovScheme,
) -> Result<LEEstimate> {
    match scheme {
        LyapunovScheme::Orbit { x0, n } => {
            assert!(*n >= 2, "estimator needs n >= 2");
            let (half, full) = orbit_log_norms(model, kind, energy, x0, *n)?;
            Ok(LEEstimate {
                value: full / *n as f64,
                n_steps: *n,
                half_value: half / (*n / 2) as f64,
                phase_count: 1,
            })
        }
        LyapunovScheme::PhaseAvg { phases, n, seed } => {
            assert!(*n >= 2 && *phases >= 1, "estimator needs n >= 2, phases >= 1");
            let dim = model.dim();
            let slots: Vec<Result<(f64, f64)>> = parallel::map_indexed(*phases, |slot| {
                let mut attempt = 0u64;
                loop {
                    let mut rng = SplitMix64::new(
                        seed ^ (0x9e37_79b9 * (slot as u64 + 1) + 0x1000 * attempt),
                    );
                    let x0 = rng.next_phase(dim);
                    match orbit_log_norms(model, kind, energy, &x0, *n) {
                        Ok(pair) => return Ok(pair),
                        Err(Error::SingularPhase { .. }) if attempt < 32 => {
                            attempt += 1;
                        }
                        Err(e) => return Err(e),
                    }
                }
            });
            let mut half_sum = 0.0;
            let mut full_sum = 0.0;
            for s in slots {
                let (h, f) = s?;
                half_sum += h;
                full_sum += f;
            }
            let p = *phases as f64;
            Ok(LEEstimate {
                value: full_sum / p / *n as f64,
                n_steps: *n,
                half_value: half_sum / p / (*n / 2) as f64,
                phase_count: *phases,
            })
        }
    }
}

/// Residuals of the determinant identities at one phase:
/// `det A = c(x) conj(c(T^-1 x))`, `det Ã = |c(T^-1 x)|^2`, and
/// `|det B̃| = 1` where defined.
#[derive(Debug, Clone)]
pub struct DetIdentityReport {
    pub res_a: f64,
    pub res_atilde: f64,
    /// `None` at singular phases, where B̃ does not exist (reported, not
    /// failed).
    pub res_btilde_unimodular: Option<f64>,
    pub singular_phase: bool,
}

pub fn det_identity_check(model: &JacobiModel, energy: Complex, x: &[f64]) -> DetIdentityReport {
    let x_prev = model.translate(x, -1);
    let c_here = model.eval_c(x);
    let c_prev = model.eval_c(&x_prev);

    let a = cocycle_matrix(model, CocycleKind::A, energy, x).expect("A is total");
    let atilde = cocycle_matrix(model, CocycleKind::ATilde, energy, x).expect("A~ is total");
    let res_a = (a.det() - c_here * c_prev.conj()).norm();
    let res_atilde = (atilde.det() - Complex::new(c_prev.norm_sqr(), 0.0)).norm();

    let btilde = cocycle_matrix(model, CocycleKind::BTilde, energy, x).ok();
    let res_btilde_unimodular = btilde.map(|b| (b.det().norm() - 1.0).abs());
    let singular_phase =
        res_btilde_unimodular.is_none() || near_singular(model, x, c_here.norm());

    DetIdentityReport {
        res_a,
        res_atilde,
        res_btilde_unimodular,
        singular_phase,
    }
}

/// `|| M(Tx)^-1 Ã^E(x) M(x) - A^E(x) ||` with `M = diag(1, 1/c(T^-1 .))`;
/// vanishes identically where defined.
pub fn conjugacy_residual(model: &JacobiModel, energy: Complex, x: &[f64]) -> Result<f64> {
    let x_prev = model.translate(x, -1);
    let c_prev = model.eval_c(&x_prev);
    let c_here = model.eval_c(x);
    if near_singular(model, &x_prev, c_prev.norm()) {
        return Err(Error::SingularPhase {
            site: -1,
            phase: x_prev,
            cabs: c_prev.norm(),
        });
    }
    if near_singular(model, x, c_here.norm()) {
        return Err(Error::SingularPhase {
            site: 0,
            phase: x.to_vec(),
            cabs: c_here.norm(),
        });
    }
    let a = cocycle_matrix(model, CocycleKind::A, energy, x)?;
    let atilde = cocycle_matrix(model, CocycleKind::ATilde, energy, x)?;
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    // M(x) = diag(1, 1/c(T^-1 x)); M(Tx)^-1 = diag(1, c(x))
    let m_x = Mat2::new(one, zero, zero, c_prev.inv());
    let m_tx_inv = Mat2::new(one, zero, zero, c_here);
    let conj = m_tx_inv * atilde * m_x;
    Ok((conj - a).op_norm())
}

/// The three Lyapunov exponents of one energy plus the residuals of the
/// exponent identities `L(A) = L(Ã)` and `L(B) = L(A) - ∫ log|c|`.
#[derive(Debug, Clone)]
pub struct LeRelationReport {
    pub le_a: LEEstimate,
    pub le_atilde: LEEstimate,
    pub le_b: LEEstimate,
    pub mean_log_c: f64,
    pub res_a_vs_atilde: f64,
    pub res_b_identity: f64,
}

pub fn le_relation_report(
    model: &JacobiModel,
    energy: Complex,
    scheme: &LyapunovScheme,
) -> Result<LeRelationReport> {
    let le_a = lyapunov(model, CocycleKind::A, energy, scheme)?;
    let le_atilde = lyapunov(model, CocycleKind::ATilde, energy, scheme)?;
    let le_b = lyapunov(model, CocycleKind::B, energy, scheme)?;
    let mean_log_c = model.mean_log_c()?;
    Ok(LeRelationReport {
        res_a_vs_atilde: (le_a.value - le_atilde.value).abs(),
        res_b_identity: (le_b.value - (le_a.value - mean_log_c)).abs(),
        le_a,
        le_atilde,
        le_b,
        mean_log_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GOLDEN_MEAN;
    use approx::assert_abs_diff_eq;

    fn free() -> JacobiModel {
        JacobiModel::free(&[GOLDEN_MEAN]).unwrap()
    }

    fn re(e: f64) -> Complex {
        Complex::new(e, 0.0)
    }

    // eigenvalues of [[E, -1], [1, 0]] are (E ± sqrt(E^2-4))/2; the top
    // Lyapunov exponent of the constant free cocycle is log of the larger
    const FREE_LE_AT_3: f64 = 0.9624236501192069;

    #[test]
    fn free_matrix_shape() {
        let m = free();
        let a = cocycle_matrix(&m, CocycleKind::A, re(3.0), &[0.123]).unwrap();
        assert!((a.a - re(3.0)).norm() < 1e-14);
        assert!((a.b - re(-1.0)).norm() < 1e-14);
        assert!((a.c - re(1.0)).norm() < 1e-14);
        assert!(a.d.norm() < 1e-14);
        // c == 1: B~ coincides with A~ and (here) with A
        let bt = cocycle_matrix(&m, CocycleKind::BTilde, re(3.0), &[0.9]).unwrap();
        let at = cocycle_matrix(&m, CocycleKind::ATilde, re(3.0), &[0.9]).unwrap();
        assert!((bt - at).op_norm() < 1e-14);
        assert!((bt - a).op_norm() < 1e-14);
    }

    #[test]
    fn singular_harper_rank_drop() {
        // c(1/2) = 0 forces the lower row of A to vanish and det A = 0
        let m = JacobiModel::singular_harper(1.0, &[GOLDEN_MEAN]).unwrap();
        let a = cocycle_matrix(&m, CocycleKind::A, re(0.0), &[0.5]).unwrap();
        // E - v(1/2) = 0 - 2*cos(pi) = 2
        assert_abs_diff_eq!(a.a.re, 2.0, epsilon = 1e-12);
        assert!(a.c.norm() < 1e-12, "c(1/2) must vanish");
        assert!(a.d.norm() == 0.0);
        assert!(a.det().norm() < 1e-12);
        // B is undefined there
        assert!(matches!(
            cocycle_matrix(&m, CocycleKind::B, re(0.0), &[0.5]),
            Err(Error::SingularPhase { .. })
        ));
    }

    #[test]
    fn det_identities_random() {
        let models = [
            free(),
            JacobiModel::almost_mathieu(0.5, &[GOLDEN_MEAN]).unwrap(),
            JacobiModel::singular_harper(0.5, &[GOLDEN_MEAN]).unwrap(),
        ];
        let mut rng = SplitMix64::new(21);
        for _ in 0..1000 {
            let m = &models[(rng.next_u64() % 3) as usize];
            let e = Complex::new(rng.next_in(-4.0, 4.0), rng.next_in(-1.0, 1.0));
            let x = [rng.next_f64()];
            let rep = det_identity_check(m, e, &x);
            assert!(rep.res_a <= 1e-14, "det A identity violated: {}", rep.res_a);
            assert!(rep.res_atilde <= 1e-14);
            if let Some(r) = rep.res_btilde_unimodular {
                assert!(r <= 1e-12, "|det B~| != 1: {r}");
            }
        }
        // exact zero of c: det A = 0
        let sh = JacobiModel::singular_harper(0.5, &[GOLDEN_MEAN]).unwrap();
        let rep = det_identity_check(&sh, re(1.0), &[0.5]);
        assert!(rep.singular_phase);
        assert!(rep.res_a <= 1e-14);
    }

    #[test]
    fn conjugacy_identity() {
        // free model: M is the identity, residual exactly 0
        let m = free();
        assert!(conjugacy_residual(&m, re(3.0), &[0.3]).unwrap() < 1e-15);

        // AMO at complex energy: identity holds to rounding at random phases
        let amo = JacobiModel::almost_mathieu(0.5, &[GOLDEN_MEAN]).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let x = [rng.next_f64()];
            let r = conjugacy_residual(&amo, Complex::new(1.0, 0.5), &x).unwrap();
            assert!(r <= 1e-13, "conjugacy residual {r}");
        }

        // singular phase is rejected, not silently computed
        let sh = JacobiModel::singular_harper(0.5, &[GOLDEN_MEAN]).unwrap();
        assert!(matches!(
            conjugacy_residual(&sh, re(1.0), &[0.5]),
            Err(Error::SingularPhase { .. })
        ));
    }

    #[test]
    fn iterate_single_factor_and_isometry() {
        let m = free();
        let (p, s) = iterate(&m, CocycleKind::A, re(3.0), &[0.6], 1).unwrap();
        let a = cocycle_matrix(&m, CocycleKind::A, re(3.0), &[0.6]).unwrap();
        assert_abs_diff_eq!(s, a.op_norm().ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(p.op_norm(), 1.0, epsilon = 1e-14);
        assert!((p.scale(re(s.exp())) - a).op_norm() < 1e-12);

        // E = 0: [[0,-1],[1,0]] is an isometry; accumulated log stays 0
        let (_, s) = iterate(&m, CocycleKind::A, re(0.0), &[0.2], 5000).unwrap();
        assert!(s.abs() <= 1e-12, "isometry log norm {s}");
    }

    #[test]
    fn iterate_growth_rate_constant_cocycle() {
        let m = free();
        // bias-free doubling-window rate for the constant matrix
        let (_, s1) = iterate(&m, CocycleKind::A, re(3.0), &[0.1], 100).unwrap();
        let (_, s2) = iterate(&m, CocycleKind::A, re(3.0), &[0.1], 200).unwrap();
        assert_abs_diff_eq!((s2 - s1) / 100.0, FREE_LE_AT_3, epsilon = 1e-9);
        // raw s/n carries the spectral-projector offset, O(1/n)
        assert_abs_diff_eq!(s2 / 200.0, FREE_LE_AT_3, epsilon = 2e-3);
    }

    #[test]
    fn iterate_composition() {
        let amo = JacobiModel::almost_mathieu(0.7, &[GOLDEN_MEAN]).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..20 {
            let x = [rng.next_f64()];
            let e = Complex::new(rng.next_in(-3.0, 3.0), rng.next_in(-0.5, 0.5));
            let (n1, n2) = (13usize, 29usize);
            let (p_all, s_all) = iterate(&amo, CocycleKind::A, e, &x, n1 + n2).unwrap();
            let (p1, s1) = iterate(&amo, CocycleKind::A, e, &x, n1).unwrap();
            let xt = amo.translate(&x, n1 as i64);
            let (p2, s2) = iterate(&amo, CocycleKind::A, e, &xt, n2).unwrap();
            let comp = p2 * p1;
            let norm = comp.op_norm();
            let comp = comp.scale(re(1.0 / norm));
            let s_comp = s1 + s2 + norm.ln();
            assert!(
                (s_all - s_comp).abs() <= 1e-10 * s_all.abs().max(1.0),
                "log mismatch {} vs {}",
                s_all,
                s_comp
            );
            assert!((p_all - comp).op_norm() <= 1e-10);
        }
    }

    #[test]
    fn lyapunov_free_model() {
        let m = free();
        // constant cocycle: E = 3 gives log((3+sqrt 5)/2) to estimator accuracy
        let sch = LyapunovScheme::PhaseAvg {
            phases: 4,
            n: 100_000,
            seed: 0,
        };
        let le = lyapunov(&m, CocycleKind::A, re(3.0), &sch).unwrap();
        assert_abs_diff_eq!(le.value, FREE_LE_AT_3, epsilon = 1e-5);
        assert!(le.converged(1e-4));

        // E = 0: isometry, exponent exactly 0
        let le0 = lyapunov(&m, CocycleKind::A, re(0.0), &sch).unwrap();
        assert!(le0.value.abs() <= 1e-8);
    }

    #[test]
    fn lyapunov_orbit_shift_invariance() {
        let amo = JacobiModel::almost_mathieu(0.5, &[GOLDEN_MEAN]).unwrap();
        let e = Complex::new(1.3, 0.4);
        let x = [0.23];
        let tx = amo.translate(&x, 1);
        let n = 40_000;
        let a = lyapunov(
            &amo,
            CocycleKind::A,
            e,
            &LyapunovScheme::Orbit { x0: x.to_vec(), n },
        )
        .unwrap();
        let b = lyapunov(&amo, CocycleKind::A, e, &LyapunovScheme::Orbit { x0: tx, n }).unwrap();
        assert!((a.value - b.value).abs() <= 1e-3);
    }

    #[test]
    fn le_relations_free() {
        let m = free();
        let sch = LyapunovScheme::PhaseAvg {
            phases: 2,
            n: 50_000,
            seed: 1,
        };
        let rep = le_relation_report(&m, re(3.0), &sch).unwrap();
        assert!(rep.mean_log_c.abs() < 1e-14);
        assert!(rep.res_a_vs_atilde <= 1e-5);
        assert!(rep.res_b_identity <= 1e-5);
    }

    #[test]
    fn le_relations_offset_from_c() {
        // c = 2 + e^{2 pi i x}: the B exponent sits log 2 below the A exponent
        let c = crate::model::TrigPoly::new(
            1,
            [
                (vec![0], Complex::new(2.0, 0.0)),
                (vec![1], Complex::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        let v = crate::model::TrigPoly::cosine(1, 1.0);
        let m = JacobiModel::new(vec![GOLDEN_MEAN], c, v, "offset").unwrap();
        assert_abs_diff_eq!(m.mean_log_c().unwrap(), 2.0f64.ln(), epsilon = 1e-13);
        let sch = LyapunovScheme::PhaseAvg {
            phases: 4,
            n: 60_000,
            seed: 2,
        };
        let rep = le_relation_report(&m, Complex::new(2.0, 0.5), &sch).unwrap();
        assert!(
            rep.res_a_vs_atilde <= 1e-3,
            "L(A) vs L(A~): {}",
            rep.res_a_vs_atilde
        );
        assert!(rep.res_b_identity <= 1e-3, "L(B) identity: {}", rep.res_b_identity);
    }

    // non-degenerate Lyapunov spectrum off the real axis:
    // L(A) > ∫ log|c| strictly at |Im E| >= 0.5
    #[test]
    fn nondegenerate_spectrum_off_axis() {
        let models = [
            JacobiModel::almost_mathieu(0.5, &[GOLDEN_MEAN]).unwrap(),
            JacobiModel::singular_harper(0.5, &[GOLDEN_MEAN]).unwrap(),
        ];
        let sch = LyapunovScheme::PhaseAvg {
            phases: 2,
            n: 20_000,
            seed: 3,
        };
        for m in &models {
            let mlc = m.mean_log_c().unwrap();
            for e in [Complex::new(0.7, 0.5), Complex::new(-1.3, 0.8)] {
                let le = lyapunov(m, CocycleKind::A, e, &sch).unwrap();
                assert!(
                    le.value > mlc + 1e-3,
                    "degenerate spectrum at {e}: L(A) = {}, ∫log|c| = {mlc}",
                    le.value
                );
            }
        }
    }
}
