//! Dominated-splitting certification.
//!
//! An energy E is off the spectrum exactly when the cocycle `(T, A^E)`
//! admits a dominated splitting. The detector does not search for an
//! invariant cone field: the dominating section is handed to us by spectral
//! theory — it is `s_-` built from the Weyl m-function — so certification
//! reduces to *verifying* the uniform contraction condition along that
//! section,
//!
//! ```text
//! sup_x | d(A_N^E(x)) . s_-(x) | < 1   for some N,
//! ```
//!
//! where the chart derivative of one step is the closed form
//! `c(x) conj(c(T^-1 x)) m_-(Tx)^2` (and `|c(T^-1 x)|^2 m_-(Tx)^2` for the
//! tilde family), so the N-step derivative is a product the profile
//! accumulates in log space. The m-values along each orbit come from one
//! boundary solve propagated by the exact Riccati step, which is itself a
//! contraction off the spectrum — errors shrink at the same rate the
//! profile decays.
//!
//! A certificate additionally witnesses:
//! * transversality of `s_+` and `s_-` (their gap bounds the inverse
//!   Green's function),
//! * clearance of `s_-` from the kernel of `A^E` at rank-dropping phases,
//! * the diagonal-conjugacy product gap `|prod lambda_1| > |prod lambda_2|`,
//! * growth of the singular-value ratio of the iterated products, an
//!   independent numerical indicator of domination.
//!
//! Refutation (`NO_DS`) rests on mass non-convergence of the boundary
//! solves (the in-spectrum signature) or on absent singular-value gap
//! growth. Near the spectral edge the certification size N must diverge,
//! and the honest output there is `UNDETERMINED`.

use crate::cocycle::CocycleKind;
use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::model::{JacobiModel, PhaseGrid};
use crate::parallel;
use crate::proj::{chordal, mobius_chart_derivative, ExtComplex, ProjPoint};
pub use crate::proj::{mobius_chart, proj_action};
use crate::weyl::{
    m_point, riccati_step, section_value, sections, transversality_from_sections, MConfig, MPoint,
    SectionField, SectionKind, SectionValue, Side,
};
use crate::Complex;

/// Detector configuration; every threshold is a certificate ingredient and
/// is echoed into outputs.
#[derive(Debug, Clone, Copy)]
pub struct DominationConfig {
    /// contraction must reach sup <= 1 - margin
    pub margin: f64,
    /// largest iterate tried before giving up
    pub n_max: usize,
    /// minimum singular-value gap growth rate (nats/step) for a DS verdict,
    /// and below which an energy counts as gap-free
    pub sv_floor: f64,
    /// fraction of degenerate grid points that refutes domination outright
    pub suspect_fraction: f64,
    /// fraction of degenerate grid points a DS certificate tolerates
    pub ds_max_degenerate: f64,
    /// sections closer than this are not transverse
    pub trans_floor: f64,
    /// s_- closer than this to ker A^E fails the clearance check
    pub kernel_floor: f64,
    /// |det A| below det_tol * ||c||^2 flags a phase for the kernel check
    pub det_tol: f64,
    /// grid subsample cap for the singular-value cross-check
    pub sv_probe: usize,
    pub m: MConfig,
}

impl Default for DominationConfig {
    fn default() -> Self {
        Self {
            margin: 0.05,
            n_max: 64,
            sv_floor: 0.02,
            suspect_fraction: 0.25,
            ds_max_degenerate: 0.002,
            trans_floor: 1e-6,
            kernel_floor: 1e-6,
            det_tol: 1e-10,
            sv_probe: 128,
            m: MConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DsStatus {
    Ds,
    NoDs,
    Undetermined,
}

impl DsStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            DsStatus::Ds => "DS",
            DsStatus::NoDs => "NO_DS",
            DsStatus::Undetermined => "UNDET",
        }
    }
}

/// The witness that a cocycle is (or is not) dominated at one energy.
#[derive(Debug, Clone)]
pub struct DominationCertificate {
    pub status: DsStatus,
    /// certified iterate count (for DS)
    pub n_steps: Option<usize>,
    /// sup over the grid of the N-step chart derivative along s_-
    pub contraction_sup: f64,
    /// min over the grid of |s_+ - s_-|
    pub transversality_min: f64,
    /// min chordal distance of s_- to ker A^E over rank-dropping phases
    /// (2 = max chordal distance, when no phase drops rank)
    pub kernel_clearance: f64,
    /// min over the grid of |prod lambda_1| - |prod lambda_2| at N
    pub lambda_gap: f64,
    /// singular-value gap growth rate at the certified N (nats/step)
    pub sv_gap_rate: f64,
    /// fraction of grid points with degenerate section construction
    pub degenerate_fraction: f64,
    pub diagnostics: String,
    /// contraction profile: (N, sup of |d A_N . s_-|), for every N tried
    pub profile: Vec<(usize, f64)>,
}

/// Derivative of the chart-coordinate action of `A^E(x)` (or the tilde
/// family) at a finite chart point z.
pub fn proj_derivative(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: &[f64],
    z: Complex,
) -> Result<Complex> {
    let mat = crate::cocycle::cocycle_matrix(model, kind, energy, x)?;
    mobius_chart_derivative(&mat, z)
}

/// Contraction profile of one energy: for each N <= n_max, the grid sup of
/// the N-step chart derivative along the dominating section, accumulated in
/// log space from the per-step closed form.
#[derive(Debug, Clone)]
pub struct ContractionProfile {
    /// sup_log[n-1] = ln sup_x |d A_n . s_-(x)|
    pub sup_log: Vec<f64>,
    /// grid points whose boundary solve did not converge
    pub unhealthy: usize,
    /// grid points excluded because an exact pole crossed the orbit window
    pub excluded: usize,
    pub points: usize,
}

impl ContractionProfile {
    /// Least N with sup <= 1 - margin.
    pub fn certified_n(&self, margin: f64) -> Option<usize> {
        let bound = (1.0 - margin).ln();
        self.sup_log.iter().position(|&s| s <= bound).map(|i| i + 1)
    }

    pub fn sup_at(&self, n: usize) -> f64 {
        self.sup_log[n - 1].exp()
    }

    pub fn pairs(&self) -> Vec<(usize, f64)> {
        self.sup_log
            .iter()
            .enumerate()
            .map(|(i, &s)| (i + 1, s.exp()))
            .collect()
    }
}

/// Per-point log-derivative walk: cumulative logs of the chart derivative
/// along the orbit, from one boundary value pushed by the Riccati step.
fn derivative_logs(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: &[f64],
    m0: ExtComplex,
    n_max: usize,
) -> Vec<f64> {
    let mut y = x.to_vec();
    let mut c_prev = model.eval_c(&model.translate(x, -1));
    let mut m_cur = m0;
    let mut acc = 0.0f64;
    let mut logs = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let c_here = model.eval_c(&y);
        let v_here = model.eval_v(&y);
        let m_next = riccati_step(energy, v_here, c_prev.norm_sqr(), m_cur);
        let m_log = match m_next {
            ExtComplex::Finite(m) => m.norm().ln(),
            ExtComplex::Infinity => f64::INFINITY,
        };
        let inc = match kind {
            CocycleKind::A => c_here.norm().ln() + c_prev.norm().ln() + 2.0 * m_log,
            CocycleKind::ATilde => 2.0 * c_prev.norm().ln() + 2.0 * m_log,
            _ => unreachable!("profiles are for the continuous families"),
        };
        acc += inc;
        logs.push(acc);
        c_prev = c_here;
        m_cur = m_next;
        model.step_forward(&mut y);
    }
    logs
}

/// Build the contraction profile from an already-computed minus-side
/// m-field over the grid.
pub fn contraction_profile_from(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    grid: &PhaseGrid,
    m_minus: &[MPoint],
    n_max: usize,
) -> ContractionProfile {
    assert_eq!(grid.len(), m_minus.len());
    let rows: Vec<Option<Vec<f64>>> = parallel::map_indexed(grid.len(), |i| {
        let mp = &m_minus[i];
        if !mp.converged {
            return None;
        }
        Some(derivative_logs(
            model,
            kind,
            energy,
            &grid.points()[i],
            mp.value,
            n_max,
        ))
    });
    let mut sup_log = vec![f64::NEG_INFINITY; n_max];
    let mut unhealthy = 0usize;
    let mut excluded = 0usize;
    for row in &rows {
        match row {
            None => unhealthy += 1,
            Some(logs) => {
                if logs.iter().any(|l| l.is_nan()) {
                    excluded += 1;
                    continue;
                }
                for (s, &l) in sup_log.iter_mut().zip(logs) {
                    if l > *s {
                        *s = l;
                    }
                }
            }
        }
    }
    ContractionProfile {
        sup_log,
        unhealthy,
        excluded,
        points: grid.len(),
    }
}

/// Contraction profile with its own boundary solves (the standalone op).
pub fn contraction_profile(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    grid: &PhaseGrid,
    n_max: usize,
    cfg: &DominationConfig,
) -> ContractionProfile {
    let mf = crate::weyl::m_field(model, energy, grid, Side::Minus, &cfg.m);
    contraction_profile_from(model, kind, energy, grid, &mf.points, n_max)
}

/// Singular-value gap cross-check: `min_x log(s1(D_N(x))/s2(D_N(x))) / N`
/// over a grid subsample, with rank-deficient phases excluded and counted.
#[derive(Debug, Clone)]
pub struct SvGapReport {
    pub min_rate: f64,
    pub rank_deficient: usize,
    pub probed: usize,
}

pub fn sv_gap_crosscheck(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    grid: &PhaseGrid,
    n_steps: usize,
    cfg: &DominationConfig,
) -> SvGapReport {
    assert!(n_steps >= 1);
    let stride = (grid.len() / cfg.sv_probe.max(1)).max(1);
    let indices: Vec<usize> = (0..grid.len()).step_by(stride).collect();
    let rates: Vec<Option<f64>> = parallel::map_slice(&indices, |&i| {
        let x = &grid.points()[i];
        // normalized product: the scale e^s cancels in the ratio
        let (p, _) = crate::cocycle::iterate(model, kind, energy, x, n_steps).ok()?;
        let (s1, s2) = p.singular_values();
        // numerical rank deficiency: the small singular value is rounding
        // noise relative to the large one
        if s1 <= 0.0 || s2 <= 1e-12 * s1 {
            return Some(f64::INFINITY); // rank deficient marker
        }
        Some((s1 / s2).ln() / n_steps as f64)
    });
    let mut min_rate = f64::INFINITY;
    let mut rank_deficient = 0usize;
    let mut probed = 0usize;
    for r in rates.into_iter().flatten() {
        probed += 1;
        if r.is_infinite() {
            rank_deficient += 1;
        } else if r < min_rate {
            min_rate = r;
        }
    }
    SvGapReport {
        min_rate,
        rank_deficient,
        probed,
    }
}

fn unit_lift(z: ExtComplex) -> (Complex, Complex) {
    ProjPoint::from_chart(z).homogeneous()
}

/// Diagonal-conjugacy products along one orbit: returns
/// `(ln |prod lambda_1|, ln |prod lambda_2|)` at iterate N for one starting
/// phase, or `None` where the walk degenerates. `lambda_2` comes from the
/// determinant identity `lambda_1 lambda_2 = det A det M(x) / det M(T^N x)`
/// so the expanding section is never iterated forward (that direction is
/// numerically unstable).
#[allow(clippy::too_many_arguments)]
fn lambda_products(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    x: &[f64],
    m0: ExtComplex,
    s_plus_here: ExtComplex,
    n_steps: usize,
    cfg: &DominationConfig,
) -> Option<(f64, f64)> {
    let mut y = x.to_vec();
    let mut c_prev = model.eval_c(&model.translate(x, -1));
    let mut m_cur = m0;
    let mut log_l1 = 0.0f64;
    let mut log_det = 0.0f64;
    let first_s_minus = section_chart(kind, c_prev, m_cur)?;
    let mut s_minus_chart = first_s_minus;
    for _ in 0..n_steps {
        let c_here = model.eval_c(&y);
        let v_here = model.eval_v(&y);
        let mat = step_matrix(kind, energy, v_here, c_here, c_prev);
        let (v1, v2) = unit_lift(s_minus_chart);
        let (w1, w2) = mat.matvec((v1, v2));
        let norm = (w1.norm_sqr() + w2.norm_sqr()).sqrt();
        log_l1 += norm.ln();
        log_det += mat.det().norm().ln();
        let m_next = riccati_step(energy, v_here, c_prev.norm_sqr(), m_cur);
        c_prev = c_here;
        m_cur = m_next;
        model.step_forward(&mut y);
        s_minus_chart = section_chart(kind, c_prev, m_cur)?;
    }
    // |det M| at both ends from the unit lifts of (s_-, s_+)
    let det_m_start = unit_det(first_s_minus, s_plus_here);
    // fresh plus-side solve at the orbit end
    let y_prev = model.translate(&y, -1);
    let mp_end = m_point(model, energy, &y_prev, Side::Plus, &cfg.m);
    if !mp_end.converged {
        return None;
    }
    let c_prev_end = model.eval_c(&y_prev);
    let plus_kind = match kind {
        CocycleKind::A => SectionKind::SPlus,
        _ => SectionKind::STildePlus,
    };
    let s_plus_end = match section_value(plus_kind, c_prev_end, mp_end.value, model.c_sup()) {
        SectionValue::Value(v) => v,
        SectionValue::Suspect => return None,
    };
    let det_m_end = unit_det(s_minus_chart, s_plus_end);
    if det_m_start <= 0.0 || det_m_end <= 0.0 {
        return None;
    }
    let log_l2 = log_det - log_l1 + det_m_start.ln() - det_m_end.ln();
    Some((log_l1, log_l2))
}

fn section_chart(kind: CocycleKind, c_prev: Complex, m: ExtComplex) -> Option<ExtComplex> {
    let section_kind = match kind {
        CocycleKind::A => SectionKind::SMinus,
        CocycleKind::ATilde => SectionKind::STildeMinus,
        _ => return None,
    };
    match section_value(section_kind, c_prev, m, c_prev.norm() + 1.0) {
        SectionValue::Value(v) => Some(v),
        SectionValue::Suspect => None,
    }
}

fn step_matrix(
    kind: CocycleKind,
    energy: Complex,
    v: f64,
    c_here: Complex,
    c_prev: Complex,
) -> Mat2 {
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    match kind {
        CocycleKind::A => Mat2::new(energy - v, -c_prev.conj(), c_here, zero),
        _ => Mat2::new(
            energy - v,
            Complex::new(-c_prev.norm_sqr(), 0.0),
            one,
            zero,
        ),
    }
}

/// |det [S_a | S_b]| for unit lifts of two chart points.
fn unit_det(a: ExtComplex, b: ExtComplex) -> f64 {
    let (a1, a2) = unit_lift(a);
    let (b1, b2) = unit_lift(b);
    (a1 * b2 - a2 * b1).norm()
}

/// Full certification pipeline for one energy.
///
/// 1. build `s_-`, `s_+` on the grid;
/// 2. transversality minimum;
/// 3. kernel clearance at rank-dropping phases;
/// 4. contraction profile, scanned for the least N with sup <= 1 - margin;
/// 5. diagonal-conjugacy product gap and the singular-value cross-check at
///    that N.
///
/// DS requires all five to pass. NO_DS is declared on mass-degenerate
/// section construction or on absent singular-value gap growth. Everything
/// else stays UNDETERMINED — near the spectral edge the certification size
/// diverges, and that honesty is preserved rather than forced into a
/// binary answer.
pub fn certify(
    model: &JacobiModel,
    energy: Complex,
    kind: CocycleKind,
    grid: &PhaseGrid,
    cfg: &DominationConfig,
) -> DominationCertificate {
    assert!(
        matches!(kind, CocycleKind::A | CocycleKind::ATilde),
        "certification runs on the continuous families"
    );
    let (minus_kind, plus_kind) = match kind {
        CocycleKind::A => (SectionKind::SMinus, SectionKind::SPlus),
        _ => (SectionKind::STildeMinus, SectionKind::STildePlus),
    };

    // (1) sections
    let s_minus = sections(model, energy, grid, minus_kind, &cfg.m);
    let s_plus = sections(model, energy, grid, plus_kind, &cfg.m);
    let degenerate_fraction = s_minus
        .degenerate_fraction(&cfg.m)
        .max(s_plus.degenerate_fraction(&cfg.m));

    // (2) transversality
    let trans = transversality_from_sections(&s_minus, &s_plus);

    // (3) kernel clearance at phases where det A^E drops rank
    let clearance = kernel_clearance(model, energy, kind, grid, &s_minus, cfg);

    // (4) contraction profile from the minus-side boundary values
    let profile =
        contraction_profile_from(model, kind, energy, grid, &s_minus.diagnostics, cfg.n_max);
    let n_cert = profile.certified_n(cfg.margin);

    // (5) sv cross-check at the candidate N (or at n_max as the growth probe)
    let probe_n = n_cert.unwrap_or(cfg.n_max);
    let sv = sv_gap_crosscheck(model, kind, energy, grid, probe_n, cfg);

    // lambda products only make sense for a DS candidate
    let lambda_gap = match n_cert {
        Some(n) if degenerate_fraction <= cfg.ds_max_degenerate => {
            lambda_gap_min(model, kind, energy, grid, &s_minus, &s_plus, n, cfg)
        }
        _ => f64::NAN,
    };

    let healthy = degenerate_fraction <= cfg.ds_max_degenerate
        && profile.unhealthy + profile.excluded
            <= (cfg.ds_max_degenerate * grid.len() as f64).ceil() as usize;
    let sv_ok = sv.min_rate >= cfg.sv_floor;
    let five_pass = healthy
        && trans.min_gap > cfg.trans_floor
        && clearance > cfg.kernel_floor
        && n_cert.is_some()
        && lambda_gap > 0.0
        && sv_ok;

    let no_ds = degenerate_fraction >= cfg.suspect_fraction
        || (sv.rank_deficient < sv.probed && sv.min_rate < cfg.sv_floor);

    let status = if five_pass {
        DsStatus::Ds
    } else if no_ds {
        DsStatus::NoDs
    } else {
        DsStatus::Undetermined
    };

    let diagnostics = format!(
        "degenerate={:.4} unhealthy={} excluded={} sv_rate={:.4} sv_rank_def={} trans_min={:.3e} ker_clear={:.3e}",
        degenerate_fraction,
        profile.unhealthy,
        profile.excluded,
        sv.min_rate,
        sv.rank_deficient,
        trans.min_gap,
        clearance,
    );

    DominationCertificate {
        status,
        n_steps: if status == DsStatus::Ds { n_cert } else { None },
        contraction_sup: match n_cert {
            Some(n) => profile.sup_at(n),
            None => profile
                .sup_log
                .last()
                .map(|l| l.exp())
                .unwrap_or(f64::INFINITY),
        },
        transversality_min: trans.min_gap,
        kernel_clearance: clearance,
        lambda_gap,
        sv_gap_rate: sv.min_rate,
        degenerate_fraction,
        diagnostics,
        profile: profile.pairs(),
    }
}

fn kernel_clearance(
    model: &JacobiModel,
    energy: Complex,
    kind: CocycleKind,
    grid: &PhaseGrid,
    s_minus: &SectionField,
    cfg: &DominationConfig,
) -> f64 {
    let det_scale = (model.c_sup() * model.c_sup()).max(f64::MIN_POSITIVE);
    let mut clearance = 2.0f64;
    for (i, x) in grid.points().iter().enumerate() {
        let c_here = model.eval_c(x);
        let c_prev = model.eval_c(&model.translate(x, -1));
        let det = match kind {
            CocycleKind::A => (c_here * c_prev.conj()).norm(),
            _ => c_prev.norm_sqr(),
        };
        if det > cfg.det_tol * det_scale {
            continue;
        }
        let v_here = model.eval_v(x);
        let mat = step_matrix(kind, energy, v_here, c_here, c_prev);
        // the numerical kernel: c-values carry rounding, so the matrix is
        // near-rank-one rather than exactly singular
        let Some((k1, k2)) = mat.min_singular_direction() else {
            continue;
        };
        let ker = ProjPoint::from_homogeneous(k1, k2);
        let Some(sv) = s_minus.values[i].value() else {
            clearance = 0.0;
            continue;
        };
        clearance = clearance.min(chordal(sv, ker.chart()));
    }
    clearance
}

fn lambda_gap_min(
    model: &JacobiModel,
    kind: CocycleKind,
    energy: Complex,
    grid: &PhaseGrid,
    s_minus: &SectionField,
    s_plus: &SectionField,
    n_steps: usize,
    cfg: &DominationConfig,
) -> f64 {
    let gaps: Vec<Option<f64>> = parallel::map_indexed(grid.len(), |i| {
        let mp = &s_minus.diagnostics[i];
        if !mp.converged {
            return None;
        }
        let s_plus_here = s_plus.values[i].value()?;
        let (l1, l2) = lambda_products(
            model,
            kind,
            energy,
            &grid.points()[i],
            mp.value,
            s_plus_here,
            n_steps,
            cfg,
        )?;
        let p1 = l1.exp().min(f64::MAX);
        let p2 = l2.exp().min(f64::MAX);
        Some(p1 - p2)
    });
    let mut min_gap = f64::INFINITY;
    let mut seen = false;
    for g in gaps.into_iter().flatten() {
        seen = true;
        if g < min_gap {
            min_gap = g;
        }
    }
    if seen {
        min_gap
    } else {
        f64::NAN
    }
}

/// Two-sided boundedness score of the transfer dynamics at one phase: the
/// minimum over probed directions of the worst log growth of `B̃_n v` over
/// `|n| <= window`. A value that stays O(1) as the window grows witnesses a
/// bounded solution — evidence that E lies in the spectrum. Diagnostic
/// only; scans never call this.
pub fn bounded_solution_score(
    model: &JacobiModel,
    energy: Complex,
    x: &[f64],
    window: usize,
) -> Result<f64> {
    let probe = |theta: f64, phi: f64| -> Result<f64> {
        let v0 = (
            Complex::new(theta.cos(), 0.0),
            Complex::from_polar(theta.sin(), phi),
        );
        let mut worst = 0.0f64;
        // forward
        let mut v = v0;
        let mut acc = 0.0f64;
        let mut orbit = crate::cocycle::OrbitCocycle::new(model, CocycleKind::BTilde, energy, x);
        for _ in 0..window {
            let m = orbit.next_matrix()?;
            v = m.matvec(v);
            let n = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
            if n == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            acc += n.ln();
            worst = worst.max(acc);
            v = (v.0 / n, v.1 / n);
        }
        // backward: invert one step at a time
        let mut v = v0;
        let mut acc = 0.0f64;
        for j in 1..=window {
            let y = model.translate(x, -(j as i64));
            let m = crate::cocycle::cocycle_matrix(model, CocycleKind::BTilde, energy, &y)?;
            let inv = m.inverse().ok_or(Error::SingularPhase {
                site: -(j as i64),
                phase: y.clone(),
                cabs: 0.0,
            })?;
            v = inv.matvec(v);
            let n = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
            if n == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            acc += n.ln();
            worst = worst.max(acc);
            v = (v.0 / n, v.1 / n);
        }
        Ok(worst)
    };
    // coarse sweep plus refinement rounds around the best direction
    let mut best = f64::INFINITY;
    let mut best_at = (0.0, 0.0);
    for i in 0..16 {
        for j in 0..8 {
            let theta = std::f64::consts::FRAC_PI_2 * (i as f64 + 0.5) / 16.0;
            let phi = std::f64::consts::TAU * j as f64 / 8.0;
            let s = probe(theta, phi)?;
            if s < best {
                best = s;
                best_at = (theta, phi);
            }
        }
    }
    let mut width = (
        std::f64::consts::FRAC_PI_2 / 16.0,
        std::f64::consts::TAU / 8.0,
    );
    for _ in 0..3 {
        let center = best_at;
        for i in -4i32..=4 {
            for j in -4i32..=4 {
                let theta = center.0 + width.0 * i as f64 / 4.0;
                let phi = center.1 + width.1 * j as f64 / 4.0;
                let s = probe(theta, phi)?;
                if s < best {
                    best = s;
                    best_at = (theta, phi);
                }
            }
        }
        width = (width.0 / 4.0, width.1 / 4.0);
    }
    Ok(best)
}
