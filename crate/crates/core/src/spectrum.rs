//! Energy-window scans and the independent truncation-eigenvalue oracle.
//!
//! The scan classifies every grid energy through the domination detector:
//! the NO_DS set is the spectrum estimate, the DS set the (real) resolvent
//! estimate, and near-edge energies stay UNDETERMINED. Independently, the
//! spectrum is estimated from the eigenvalues of finite Hermitian
//! truncations of the operator — generalized eigenvalues are dense in the
//! spectrum, so finite-volume eigenvalues fill it as sizes and phases
//! accumulate. Comparing the two estimates (Hausdorff distance) is a real
//! two-sided test of the dynamical classification, because the eigenvalue
//! route shares no code with the cocycle pipeline.
//!
//! Dirichlet truncations pollute spectral gaps with boundary-localized
//! eigenstates, so each eigenvalue is weighed by the mass its eigenvector
//! carries in a window at the matrix ends and boundary-dominated states are
//! dropped. For a kept pair `(lambda, u)` the extension of `u` by zero has
//! residual `|c u|` only at the cut bonds, and for self-adjoint operators
//! `dist(lambda, spectrum) <= ||(H - lambda) u||`, so kept eigenvalues are
//! genuinely close to the spectrum while edge states are not protected by
//! any such bound — they are exactly the ones the filter removes.
//!
//! Everything here reduces deterministically: energies map in index order,
//! truncation blocks gather in (size, phase) order, so scan outputs are
//! byte-identical across runs and worker counts.

use crate::cocycle::{lyapunov, CocycleKind, LyapunovScheme};
use crate::domination::{certify, contraction_profile, DominationCertificate, DominationConfig, DsStatus};
use crate::error::{Error, Result};
use crate::linalg::{symtridiag_eigenvalues, symtridiag_eigenvector};
use crate::model::{JacobiModel, PhaseGrid};
use crate::parallel;
use crate::rng::SplitMix64;
use crate::Complex;
use std::fmt::Write as _;

/// Boundary-state filter for truncation eigenvalues.
#[derive(Debug, Clone, Copy)]
pub struct EdgeFilter {
    /// window = max(8, n / window_div) sites at each end
    pub window_div: usize,
    /// drop eigenvalues whose eigenvector carries more than this mass in
    /// the two windows
    pub max_boundary_mass: f64,
}

impl Default for EdgeFilter {
    fn default() -> Self {
        Self {
            window_div: 32,
            max_boundary_mass: 0.5,
        }
    }
}

/// Merged spectrum estimate from finite truncations.
#[derive(Debug, Clone)]
pub struct TruncationSpectrum {
    pub sizes: Vec<usize>,
    pub phases: Vec<Vec<f64>>,
    /// kept eigenvalues over all (size, phase) blocks, ascending
    pub eigenvalues: Vec<f64>,
    /// Hausdorff drift between the two largest sizes
    pub coverage_radius: f64,
    /// eigenvalues dropped by the boundary filter
    pub dropped: usize,
    /// per-block notes (skipped blocks and the like)
    pub notes: Vec<String>,
}

impl TruncationSpectrum {
    /// Distance from `e` to the kept eigenvalue set.
    pub fn dist(&self, e: f64) -> f64 {
        dist_to_sorted(&self.eigenvalues, e)
    }
}

fn dist_to_sorted(sorted: &[f64], e: f64) -> f64 {
    if sorted.is_empty() {
        return f64::INFINITY;
    }
    match sorted.binary_search_by(|x| x.partial_cmp(&e).unwrap()) {
        Ok(_) => 0.0,
        Err(i) => {
            let mut d = f64::INFINITY;
            if i < sorted.len() {
                d = d.min((sorted[i] - e).abs());
            }
            if i > 0 {
                d = d.min((sorted[i - 1] - e).abs());
            }
            d
        }
    }
}

/// Hausdorff distance between two finite point sets (sorted ascending).
pub fn hausdorff_distance(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let one_way = |from: &[f64], to: &[f64]| {
        from.iter()
            .map(|&x| dist_to_sorted(to, x))
            .fold(0.0f64, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Eigenvalues of one (size, phase) truncation block, boundary-filtered.
fn truncation_block(
    model: &JacobiModel,
    size: usize,
    phase: &[f64],
    filter: &EdgeFilter,
) -> (Vec<f64>, usize) {
    // Hermitian tridiagonal section on sites 0..size-1: diagonal v(T^k x),
    // off-diagonal c(T^k x). A diagonal unitary gauge makes the
    // off-diagonals |c| >= 0 without moving eigenvalues or |u| profiles.
    let mut diag = Vec::with_capacity(size);
    let mut off = Vec::with_capacity(size - 1);
    let mut y = phase.to_vec();
    for k in 0..size {
        diag.push(model.eval_v(&y));
        if k + 1 < size {
            off.push(model.eval_c(&y).norm());
        }
        model.step_forward(&mut y);
    }
    let eigenvalues = symtridiag_eigenvalues(&diag, &off);

    let window = (size / filter.window_div).max(8).min(size / 2);
    let mut kept = Vec::with_capacity(size);
    let mut dropped = 0usize;
    for (j, &lam) in eigenvalues.iter().enumerate() {
        let u = symtridiag_eigenvector(&diag, &off, lam, j as u64);
        let mass: f64 = u[..window].iter().map(|t| t * t).sum::<f64>()
            + u[size - window..].iter().map(|t| t * t).sum::<f64>();
        if mass <= filter.max_boundary_mass {
            kept.push(lam);
        } else {
            dropped += 1;
        }
    }
    (kept, dropped)
}

/// The truncation-eigenvalue spectrum estimate: all kept eigenvalues over
/// the (size, phase) blocks, merged and sorted, with the size-doubling
/// Hausdorff drift as the resolution estimate.
pub fn truncation_spectrum(
    model: &JacobiModel,
    sizes: &[usize],
    phases: &[Vec<f64>],
    filter: &EdgeFilter,
) -> Result<TruncationSpectrum> {
    if sizes.is_empty() || sizes.iter().any(|&s| s < 2) {
        return Err(Error::InvalidConfig(
            "truncation sizes must be >= 2 and nonempty".into(),
        ));
    }
    if phases.is_empty() {
        return Err(Error::InvalidConfig("need at least one phase".into()));
    }
    let mut sorted_sizes = sizes.to_vec();
    sorted_sizes.sort_unstable();
    sorted_sizes.dedup();

    let blocks: Vec<(usize, usize)> = sorted_sizes
        .iter()
        .flat_map(|&s| (0..phases.len()).map(move |p| (s, p)))
        .collect();
    let results: Vec<(usize, Vec<f64>, usize)> = parallel::map_slice(&blocks, |&(size, p)| {
        let (kept, dropped) = truncation_block(model, size, &phases[p], filter);
        (size, kept, dropped)
    });

    let mut by_size: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    let mut dropped = 0usize;
    for (size, kept, d) in results {
        dropped += d;
        by_size.entry(size).or_default().extend(kept);
    }
    for v in by_size.values_mut() {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }

    let coverage_radius = if by_size.len() >= 2 {
        let mut it = by_size.iter().rev();
        let (_, largest) = it.next().expect("nonempty");
        let (_, second) = it.next().expect("len >= 2");
        hausdorff_distance(largest, second)
    } else {
        f64::INFINITY
    };

    let mut eigenvalues: Vec<f64> = by_size.into_values().flatten().collect();
    eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());

    Ok(TruncationSpectrum {
        sizes: sorted_sizes,
        phases: phases.to_vec(),
        eigenvalues,
        coverage_radius,
        dropped,
        notes: Vec::new(),
    })
}

/// Scan configuration; every field is echoed into the summary so outputs
/// are self-describing and reproducible.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// phase-grid resolution for sup-estimates
    pub phases_per_dim: usize,
    pub domination: DominationConfig,
    pub trunc_sizes: Vec<usize>,
    pub trunc_phases: usize,
    pub le_steps: usize,
    pub le_phases: usize,
    pub seed: u64,
    pub edge_filter: EdgeFilter,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            phases_per_dim: 2048,
            domination: DominationConfig::default(),
            trunc_sizes: vec![512, 1024],
            trunc_phases: 8,
            le_steps: 20_000,
            le_phases: 4,
            seed: 0,
            edge_filter: EdgeFilter::default(),
        }
    }
}

/// One classified energy.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub energy: f64,
    pub certificate: DominationCertificate,
    pub le_a: f64,
    pub le_b: f64,
    pub dist_trunc: f64,
}

#[derive(Debug, Clone)]
pub struct ScanSummary {
    /// maximal runs of consecutive NO_DS grid energies
    pub sigma_intervals: Vec<(f64, f64)>,
    /// Hausdorff distance between the NO_DS set and the truncation spectrum
    pub hausdorff: f64,
    pub ds_count: usize,
    pub no_ds_count: usize,
    pub undetermined_count: usize,
    pub undetermined_fraction: f64,
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub model_label: String,
    pub e_min: f64,
    pub e_max: f64,
    pub step: f64,
    pub config: ScanConfig,
    pub rows: Vec<ScanRow>,
    pub truncation: TruncationSpectrum,
    pub summary: ScanSummary,
}

/// Classify every grid energy in `[e_min, e_max]` and compare against the
/// truncation oracle.
pub fn scan(
    model: &JacobiModel,
    e_min: f64,
    e_max: f64,
    step: f64,
    config: &ScanConfig,
) -> Result<ScanResult> {
    if !(step > 0.0) || !e_min.is_finite() || !e_max.is_finite() || e_min >= e_max {
        return Err(Error::InvalidConfig(format!(
            "bad window [{e_min}, {e_max}] step {step}"
        )));
    }
    let count = ((e_max - e_min) / step + 1.5).floor() as usize;
    let energies: Vec<f64> = (0..count)
        .map(|i| e_min + i as f64 * step)
        .filter(|&e| e <= e_max + 1e-9 * step)
        .collect();

    let mut rng = SplitMix64::new(config.seed ^ 0x7472756e63);
    let phases: Vec<Vec<f64>> = (0..config.trunc_phases)
        .map(|_| rng.next_phase(model.dim()))
        .collect();
    let truncation = truncation_spectrum(model, &config.trunc_sizes, &phases, &config.edge_filter)?;

    let grid = PhaseGrid::uniform(model.dim(), config.phases_per_dim)?;

    let rows: Vec<ScanRow> = parallel::map_slice(&energies, |&e| {
        let energy = Complex::new(e, 0.0);
        let certificate = certify(model, energy, CocycleKind::A, &grid, &config.domination);
        let scheme = LyapunovScheme::PhaseAvg {
            phases: config.le_phases,
            n: config.le_steps,
            seed: config.seed,
        };
        let le_a = lyapunov(model, CocycleKind::A, energy, &scheme)
            .map(|l| l.value)
            .unwrap_or(f64::NAN);
        let le_b = match lyapunov(model, CocycleKind::B, energy, &scheme) {
            Ok(l) => l.value,
            // exhausted starting phases (dense singular set): fall back to
            // the exponent identity L(B) = L(A) - mean log|c|
            Err(_) => le_a - model.mean_log_c().unwrap_or(f64::NAN),
        };
        let dist_trunc = truncation.dist(e);
        ScanRow {
            energy: e,
            certificate,
            le_a,
            le_b,
            dist_trunc,
        }
    });

    let summary = summarize(&rows, step, &truncation);
    Ok(ScanResult {
        model_label: model.label().to_string(),
        e_min,
        e_max,
        step,
        config: config.clone(),
        rows,
        truncation,
        summary,
    })
}

fn summarize(rows: &[ScanRow], step: f64, trunc: &TruncationSpectrum) -> ScanSummary {
    let mut sigma_intervals: Vec<(f64, f64)> = Vec::new();
    let mut no_ds_energies: Vec<f64> = Vec::new();
    let mut counts = (0usize, 0usize, 0usize);
    for row in rows {
        match row.certificate.status {
            DsStatus::Ds => counts.0 += 1,
            DsStatus::NoDs => {
                counts.1 += 1;
                no_ds_energies.push(row.energy);
                match sigma_intervals.last_mut() {
                    Some(last) if row.energy - last.1 <= 1.5 * step => last.1 = row.energy,
                    _ => sigma_intervals.push((row.energy, row.energy)),
                }
            }
            DsStatus::Undetermined => counts.2 += 1,
        }
    }
    let hausdorff = hausdorff_distance(&no_ds_energies, &trunc.eigenvalues);
    let total = rows.len().max(1);
    ScanSummary {
        sigma_intervals,
        hausdorff,
        ds_count: counts.0,
        no_ds_count: counts.1,
        undetermined_count: counts.2,
        undetermined_fraction: counts.2 as f64 / total as f64,
    }
}

/// Combes-Thomas consistency: on the resolvent set the transfer exponent
/// satisfies `L(B) >= kappa dist(E, spectrum) > 0`. The check asserts
/// positivity on every DS row and fits the best empirical kappa.
#[derive(Debug, Clone)]
pub struct CombesThomasReport {
    pub rows_checked: usize,
    /// DS energies with non-positive transfer exponent
    pub violations: Vec<f64>,
    /// largest kappa with le_B >= kappa * dist for all checked rows
    pub kappa_fit: f64,
    pub kappa_floor: f64,
    pub passes_floor: bool,
}

pub fn combes_thomas_check(scan: &ScanResult, kappa_floor: f64) -> CombesThomasReport {
    let mut violations = Vec::new();
    let mut kappa_fit = f64::INFINITY;
    let mut rows_checked = 0usize;
    for row in &scan.rows {
        if row.certificate.status != DsStatus::Ds {
            continue; // the bound applies only on the resolvent set
        }
        rows_checked += 1;
        if !(row.le_b > 0.0) {
            violations.push(row.energy);
        }
        if row.dist_trunc > 0.0 && row.le_b.is_finite() {
            kappa_fit = kappa_fit.min(row.le_b / row.dist_trunc);
        }
    }
    if rows_checked == 0 {
        kappa_fit = f64::NAN;
    }
    CombesThomasReport {
        rows_checked,
        violations,
        kappa_fit,
        kappa_floor,
        passes_floor: kappa_fit.is_nan() || kappa_fit >= kappa_floor,
    }
}

/// Contraction-decay consistency at one DS energy: the slope of the log
/// contraction profile against `-2 L(B)`.
#[derive(Debug, Clone)]
pub struct DecayRateReport {
    pub energy: f64,
    pub slope: f64,
    pub le_b: f64,
    /// |slope + 2 L(B)| / (2 L(B))
    pub relative_deviation: f64,
}

pub fn decay_rate_check(
    model: &JacobiModel,
    energy: f64,
    n_list: &[usize],
    config: &ScanConfig,
) -> Result<DecayRateReport> {
    if n_list.len() < 2 {
        return Err(Error::InvalidConfig("need at least two profile sizes".into()));
    }
    let n_max = *n_list.iter().max().expect("nonempty");
    let grid = PhaseGrid::uniform(model.dim(), config.phases_per_dim)?;
    let e = Complex::new(energy, 0.0);
    let profile = contraction_profile(model, CocycleKind::A, e, &grid, n_max, &config.domination);
    // least-squares slope of ln sup over the requested iterate counts
    let pts: Vec<(f64, f64)> = n_list
        .iter()
        .map(|&n| (n as f64, profile.sup_log[n - 1]))
        .collect();
    let len = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (len * sxy - sx * sy) / (len * sxx - sx * sx);

    let scheme = LyapunovScheme::PhaseAvg {
        phases: config.le_phases.max(4),
        n: config.le_steps.max(50_000),
        seed: config.seed,
    };
    let le_b = lyapunov(model, CocycleKind::B, e, &scheme)?.value;
    let relative_deviation = (slope + 2.0 * le_b).abs() / (2.0 * le_b).abs().max(f64::MIN_POSITIVE);
    Ok(DecayRateReport {
        energy,
        slope,
        le_b,
        relative_deviation,
    })
}

fn fmt_opt(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        String::new()
    }
}

/// The scan CSV, one row per energy:
/// `energy,status,N,contraction_sup,transversality_min,kernel_clearance,lambda_gap,le_A,le_B,dist_trunc`.
pub fn scan_csv(scan: &ScanResult) -> String {
    let mut out = String::from(
        "energy,status,N,contraction_sup,transversality_min,kernel_clearance,lambda_gap,le_A,le_B,dist_trunc\n",
    );
    for row in &scan.rows {
        let c = &row.certificate;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            row.energy,
            c.status.as_str(),
            c.n_steps.map(|n| n.to_string()).unwrap_or_default(),
            fmt_opt(c.contraction_sup),
            fmt_opt(c.transversality_min),
            fmt_opt(c.kernel_clearance),
            fmt_opt(c.lambda_gap),
            fmt_opt(row.le_a),
            fmt_opt(row.le_b),
            fmt_opt(row.dist_trunc),
        );
    }
    out
}

/// The structured-text summary document.
pub fn scan_summary_text(scan: &ScanResult, ct: &CombesThomasReport) -> String {
    let cfg = &scan.config;
    let mut s = String::new();
    let _ = writeln!(s, "model = {}", scan.model_label);
    let _ = writeln!(
        s,
        "window = [{}, {}] step = {}",
        scan.e_min, scan.e_max, scan.step
    );
    let _ = writeln!(s, "phase_grid = {}", cfg.phases_per_dim);
    let _ = writeln!(
        s,
        "trunc_sizes = {}",
        cfg.trunc_sizes
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    let _ = writeln!(s, "trunc_phases = {}", cfg.trunc_phases);
    let _ = writeln!(s, "le_steps = {}", cfg.le_steps);
    let _ = writeln!(s, "le_phases = {}", cfg.le_phases);
    let _ = writeln!(s, "n_max = {}", cfg.domination.n_max);
    let _ = writeln!(s, "margin = {}", cfg.domination.margin);
    let _ = writeln!(s, "seed = {}", cfg.seed);
    let _ = writeln!(s, "coverage_radius = {}", scan.truncation.coverage_radius);
    let _ = writeln!(s, "trunc_eigenvalues = {}", scan.truncation.eigenvalues.len());
    let _ = writeln!(s, "trunc_dropped_edge_states = {}", scan.truncation.dropped);
    let intervals = scan
        .summary
        .sigma_intervals
        .iter()
        .map(|(a, b)| format!("[{a}, {b}]"))
        .collect::<Vec<_>>()
        .join(" ");
    let _ = writeln!(s, "sigma_intervals = {intervals}");
    let _ = writeln!(s, "hausdorff = {}", scan.summary.hausdorff);
    let _ = writeln!(s, "ds = {}", scan.summary.ds_count);
    let _ = writeln!(s, "no_ds = {}", scan.summary.no_ds_count);
    let _ = writeln!(s, "undetermined = {}", scan.summary.undetermined_count);
    let _ = writeln!(
        s,
        "undetermined_fraction = {}",
        scan.summary.undetermined_fraction
    );
    let _ = writeln!(s, "combes_thomas_kappa = {}", ct.kappa_fit);
    let _ = writeln!(s, "combes_thomas_violations = {}", ct.violations.len());
    s
}

/// Write `scan.csv` and `summary.txt` into `dir`.
pub fn persist(scan: &ScanResult, dir: &std::path::Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let ct = combes_thomas_check(scan, 1e-3);
    std::fs::write(dir.join("scan.csv"), scan_csv(scan))?;
    std::fs::write(dir.join("summary.txt"), scan_summary_text(scan, &ct))?;
    Ok(())
}

/// Parse a scan CSV back into `(energy, status, scalar columns)` tuples;
/// the float columns round-trip bit-exactly through the shortest-form
/// formatter.
pub fn load_scan_csv(text: &str) -> Result<Vec<(f64, String, Vec<Option<f64>>)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(Error::Io(format!(
                "line {}: expected 10 columns, got {}",
                i + 1,
                fields.len()
            )));
        }
        let energy: f64 = fields[0]
            .parse()
            .map_err(|e| Error::Io(format!("line {}: {e}", i + 1)))?;
        let status = fields[1].to_string();
        let scalars = fields[3..]
            .iter()
            .map(|f| f.parse::<f64>().ok())
            .collect();
        rows.push((energy, status, scalars));
    }
    Ok(rows)
}
