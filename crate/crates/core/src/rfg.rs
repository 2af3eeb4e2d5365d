//! The random fermionic Gaussian (RFG) ensemble `C = U C₀ U†` with `U` Haar
//! and `C₀` a rank-`m` projector.

use std::f64::consts::LN_2;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::gaussian_state::{distance_to_mixed, entropy, CovarianceMatrix};
use crate::linalg::{eigvalsh_ref, sample_haar_columns, sample_haar_unitary, HermitianMatrix};
use crate::page_curves::{CurvePoint, CurveSource, PageCurve};
use crate::parallel::map_indices;
use crate::rng::{stream, Domain};
use crate::stats::{linear_fit, LinearFit, Summary};

/// Ensemble size, filling and Monte-Carlo budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub n: usize,
    pub m: usize,
    pub sample_count: usize,
    pub seed: u64,
}

impl EnsembleConfig {
    pub fn new(n: usize, m: usize, sample_count: usize, seed: u64) -> Result<Self> {
        let cfg = Self { n, m, sample_count, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `m = N/2`.
    pub fn half_filling(n: usize, sample_count: usize, seed: u64) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return validation(format!("half filling needs even N, got {n}"));
        }
        Self::new(n, n / 2, sample_count, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return validation("ensemble needs N >= 1");
        }
        // m = 0 (the vacuum) is accepted.
        if self.m > self.n {
            return validation(format!("particle number m = {} exceeds N = {}", self.m, self.n));
        }
        if self.sample_count == 0 {
            return validation("sample_count must be >= 1");
        }
        Ok(())
    }

    pub fn filling(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

/// Full-system sample `U C₀ U†`, with `U` drawn from the Haar stream for
/// `sample_index`.
pub fn sample_covariance(cfg: &EnsembleConfig, sample_index: u64) -> Result<CovarianceMatrix> {
    cfg.validate()?;
    let n = cfg.n;
    let u = sample_haar_unitary(n, &mut stream(cfg.seed, Domain::HaarUnitary, sample_index))?;
    let cols = u.as_mat().submatrix(0, 0, n, cfg.m);
    let c = if cfg.m == 0 { Mat::zeros(n, n) } else { cols * cols.adjoint() };
    Ok(CovarianceMatrix::new_unchecked(HermitianMatrix::symmetrized(c)))
}

/// Reduced covariance of the first `n_a` modes of one ensemble sample.
///
/// Drawn directly as `Q_m† Q_m`, where `Q` holds the first `n_a` columns of
/// a Haar unitary and `Q_m` its first `m` rows. Since `Uᵀ` and `conj(U)` are
/// Haar whenever `U` is, this has the same law as the leading block of
/// `U C₀ U†` while costing a thin QR instead of a full one. Leading `k×k`
/// blocks of the result are valid samples for every `k ≤ n_a`.
pub fn sample_reduced(cfg: &EnsembleConfig, n_a: usize, sample_index: u64) -> Result<CovarianceMatrix> {
    cfg.validate()?;
    if n_a == 0 || n_a > cfg.n {
        return validation(format!("subsystem size {n_a} outside [1, {}]", cfg.n));
    }
    if cfg.m == 0 {
        return Ok(CovarianceMatrix::new_unchecked(HermitianMatrix::zeros(n_a)));
    }
    let q = sample_haar_columns(cfg.n, n_a, &mut stream(cfg.seed, Domain::ReducedBlock, sample_index))?;
    let qm = q.as_ref().submatrix(0, 0, cfg.m, n_a);
    Ok(CovarianceMatrix::new_unchecked(HermitianMatrix::symmetrized(qm.adjoint() * qm)))
}

/// Schur–Weyl coefficients with `⟨Tr C_A²⟩ = α N_A² + β N_A`.
pub fn moment_alpha_beta(n: usize, m: usize) -> Result<(f64, f64)> {
    if n < 2 {
        return validation(format!("moment_alpha_beta needs N >= 2, got {n}"));
    }
    let (nf, mf) = (n as f64, m as f64);
    let denom = nf * (nf * nf - 1.0);
    Ok(((nf * mf - mf * mf) / denom, (nf * mf * mf - mf) / denom))
}

/// Monte-Carlo statistics of one Page-curve point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub mean_entropy: f64,
    pub variance_entropy: f64,
    pub stderr: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

impl EnsembleStats {
    pub fn from_samples(values: Vec<f64>, keep: bool) -> Self {
        let s = Summary::of(&values);
        Self { mean_entropy: s.mean, variance_entropy: s.variance, stderr: s.stderr, samples: keep.then_some(values) }
    }
}

/// Monte-Carlo Page curve and its per-point statistics.
#[derive(Clone, Debug)]
pub struct RfgPageCurve {
    pub curve: PageCurve,
    pub stats: Vec<EnsembleStats>,
}

/// Entropy of the leading `k×k` block for every `k` in `sizes`.
fn leading_entropies(c: &CovarianceMatrix, sizes: &[usize]) -> Result<Vec<f64>> {
    sizes
        .iter()
        .map(|&k| crate::gaussian_state::entropy_from_eigenvalues(&eigvalsh_ref(c.matrix().as_mat().submatrix(0, 0, k, k))?))
        .collect()
}

/// Per-sample entropies, indexed `[sample][size]`.
pub fn sample_entropies(cfg: &EnsembleConfig, sizes: &[usize]) -> Result<Vec<Vec<f64>>> {
    cfg.validate()?;
    check_sizes(cfg.n, sizes)?;
    let n_max = *sizes.iter().max().unwrap();
    map_indices(cfg.sample_count, |i| leading_entropies(&sample_reduced(cfg, n_max, i as u64)?, sizes))
}

fn check_sizes(n: usize, sizes: &[usize]) -> Result<()> {
    if sizes.is_empty() {
        return validation("no subsystem sizes given");
    }
    if let Some(&bad) = sizes.iter().find(|&&k| k == 0 || k > n) {
        return validation(format!("subsystem size {bad} outside [1, {n}]"));
    }
    Ok(())
}

/// Mean entropy of the first `N_A` modes over the ensemble, for each size.
pub fn rfg_page_curve(cfg: &EnsembleConfig, subsystem_sizes: &[usize]) -> Result<RfgPageCurve> {
    let mut sizes = subsystem_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let per_sample = sample_entropies(cfg, &sizes)?;
    let mut stats = Vec::with_capacity(sizes.len());
    let mut points = Vec::with_capacity(sizes.len());
    for (j, &k) in sizes.iter().enumerate() {
        let column: Vec<f64> = per_sample.iter().map(|row| row[j]).collect();
        let st = EnsembleStats::from_samples(column, false);
        points.push(CurvePoint { n_a: k, mean: st.mean_entropy, stderr: st.stderr });
        stats.push(st);
    }
    let curve = PageCurve::new(cfg.n, CurveSource::RfgMontecarlo, format!("rfg m={}", cfg.m), points)?;
    Ok(RfgPageCurve { curve, stats })
}

/// Truncated RFG Page curve density `f − (f²/2 + f³/6 + f⁴/12)/ln 2`;
/// the dropped terms are `O(f⁵)`.
pub fn series_rfg(f: f64) -> Result<f64> {
    check_half_range(f)?;
    Ok(f - (f * f / 2.0 + f.powi(3) / 6.0 + f.powi(4) / 12.0) / LN_2)
}

pub(crate) fn check_half_range(f: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&f) {
        return validation(format!("subsystem fraction {f} outside [0, 1/2]"));
    }
    Ok(())
}

/// Which concentration inequality a report tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// `P(d ≥ η + 2ε) ≤ 2 exp(−ε²/η′)`.
    CovarianceTypicality,
    /// `P(d² ≤ η_a − 2ε) ≤ 2 exp(−ε²/η′_a)`.
    CovarianceAtypicality,
    /// `P(S ≤ N_A − ε) ≤ 2 exp(−(√ε − ξ)²/ξ′)` for `ε > ξ²`.
    EntropyTypicality,
    /// `P(S ≥ N_A − ξ_a + ε) ≤ 2 exp(−ε²/ξ′_a)`.
    EntropyAtypicality,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] =
        [BoundKind::CovarianceTypicality, BoundKind::CovarianceAtypicality, BoundKind::EntropyTypicality, BoundKind::EntropyAtypicality];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::CovarianceTypicality => "covariance-typicality",
            BoundKind::CovarianceAtypicality => "covariance-atypicality",
            BoundKind::EntropyTypicality => "entropy-typicality",
            BoundKind::EntropyAtypicality => "entropy-atypicality",
        }
    }
}

/// Constants of the four bounds at half filling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    pub eta: f64,
    pub eta_prime: f64,
    pub eta_a: f64,
    pub eta_a_prime: f64,
    pub xi: f64,
    pub xi_prime: f64,
    pub xi_a: f64,
    pub xi_a_prime: f64,
}

impl BoundConstants {
    pub fn new(n: usize, n_a: usize) -> Self {
        let (n, a) = (n as f64, n_a as f64);
        Self {
            eta: (a * a / (2.0 * (n - 1.0))).sqrt(),
            eta_prime: 12.0 / n,
            eta_a: a * a / (4.0 * (n + 1.0)),
            eta_a_prime: 12.0 * a / n,
            xi: (2.0 * a * a / (n - 1.0)).sqrt(),
            xi_prime: 192.0 / n,
            xi_a: a * a / (2.0 * LN_2 * (n + 1.0)),
            xi_a_prime: 192.0 * a / (LN_2 * LN_2 * n),
        }
    }

    /// Right-hand side at `epsilon`, or `None` outside the bound's domain.
    pub fn bound(&self, kind: BoundKind, epsilon: f64) -> Option<f64> {
        let e = epsilon;
        match kind {
            BoundKind::CovarianceTypicality => Some(2.0 * (-e * e / self.eta_prime).exp()),
            BoundKind::CovarianceAtypicality => Some(2.0 * (-e * e / self.eta_a_prime).exp()),
            BoundKind::EntropyTypicality => (e > self.xi * self.xi).then(|| 2.0 * (-(e.sqrt() - self.xi).powi(2) / self.xi_prime).exp()),
            BoundKind::EntropyAtypicality => Some(2.0 * (-e * e / self.xi_a_prime).exp()),
        }
    }
}

/// Default `ε` grid for one bound: multiples of the scale at which the bound
/// crosses one, so the grid runs from vacuous into binding.
pub fn default_epsilon_grid(kind: BoundKind, n: usize, n_a: usize) -> Vec<f64> {
    const MULTIPLES: [f64; 7] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0];
    let k = BoundConstants::new(n, n_a);
    let scale = |width: f64| (width * LN_2).sqrt();
    match kind {
        BoundKind::CovarianceTypicality => MULTIPLES.iter().map(|c| c * scale(k.eta_prime)).collect(),
        BoundKind::CovarianceAtypicality => MULTIPLES.iter().map(|c| c * scale(k.eta_a_prime)).collect(),
        BoundKind::EntropyTypicality => MULTIPLES.iter().map(|c| (k.xi + c * scale(k.xi_prime)).powi(2)).collect(),
        BoundKind::EntropyAtypicality => MULTIPLES.iter().map(|c| c * scale(k.xi_a_prime)).collect(),
    }
}

/// Distance `d = ‖C_A − ⟨C_A⟩‖_HS` and entropy `S` of one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observables {
    pub distance: f64,
    pub entropy: f64,
}

/// Observables of every ensemble sample; shared by all four bound kinds.
pub fn sample_observables(cfg: &EnsembleConfig, n_a: usize) -> Result<Vec<Observables>> {
    require_half_filling(cfg)?;
    map_indices(cfg.sample_count, |i| {
        let c = sample_reduced(cfg, n_a, i as u64)?;
        Ok(Observables { distance: distance_to_mixed(&c), entropy: entropy(&c)? })
    })
}

fn require_half_filling(cfg: &EnsembleConfig) -> Result<()> {
    cfg.validate()?;
    if 2 * cfg.m != cfg.n {
        return validation(format!("concentration bounds are stated at half filling; got m = {}, N = {}", cfg.m, cfg.n));
    }
    Ok(())
}

/// Empirical tail frequencies against an analytic bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub bound_kind: BoundKind,
    pub n: usize,
    pub n_a: usize,
    pub sample_count: usize,
    pub epsilon_grid: Vec<f64>,
    pub empirical_tail: Vec<f64>,
    /// `None` where `ε` lies outside the bound's stated domain.
    pub analytic_bound: Vec<Option<f64>>,
    pub flagged: Vec<bool>,
}

impl ConcentrationReport {
    pub fn violations(&self) -> usize {
        self.flagged.iter().filter(|&&f| f).count()
    }

    /// Grid points where the bound is below one, i.e. actually constrains.
    pub fn binding_points(&self) -> usize {
        self.analytic_bound.iter().filter(|b| matches!(b, Some(v) if *v < 1.0)).count()
    }
}

/// A point is flagged when the empirical frequency exceeds the bound by more
/// than three binomial standard errors, the error taken at `p = min(bound, 1)`.
pub fn is_violation(empirical: f64, bound: f64, samples: usize) -> bool {
    if bound >= 1.0 {
        return false;
    }
    let se = (bound * (1.0 - bound) / samples as f64).sqrt();
    empirical > bound + 3.0 * se
}

/// Builds a report from precomputed observables.
pub fn concentration_report(
    kind: BoundKind,
    n: usize,
    n_a: usize,
    observables: &[Observables],
    epsilon_grid: &[f64],
) -> Result<ConcentrationReport> {
    if observables.is_empty() {
        return validation("no samples");
    }
    if let Some(bad) = epsilon_grid.iter().find(|&&e| !(e > 0.0)) {
        return validation(format!("epsilon grid values must be > 0, got {bad}"));
    }
    let k = BoundConstants::new(n, n_a);
    let na = n_a as f64;
    let total = observables.len();
    let mut empirical = Vec::with_capacity(epsilon_grid.len());
    let mut bounds = Vec::with_capacity(epsilon_grid.len());
    let mut flagged = Vec::with_capacity(epsilon_grid.len());
    for &e in epsilon_grid {
        let hits = observables
            .iter()
            .filter(|o| match kind {
                BoundKind::CovarianceTypicality => o.distance >= k.eta + 2.0 * e,
                BoundKind::CovarianceAtypicality => o.distance * o.distance <= k.eta_a - 2.0 * e,
                BoundKind::EntropyTypicality => o.entropy <= na - e,
                BoundKind::EntropyAtypicality => o.entropy >= na - k.xi_a + e,
            })
            .count();
        let freq = hits as f64 / total as f64;
        let bound = k.bound(kind, e);
        flagged.push(bound.is_some_and(|b| is_violation(freq, b, total)));
        empirical.push(freq);
        bounds.push(bound);
    }
    Ok(ConcentrationReport {
        bound_kind: kind,
        n,
        n_a,
        sample_count: total,
        epsilon_grid: epsilon_grid.to_vec(),
        empirical_tail: empirical,
        analytic_bound: bounds,
        flagged,
    })
}

/// Samples the ensemble and tests one bound on `epsilon_grid`.
pub fn concentration_experiment(cfg: &EnsembleConfig, n_a: usize, epsilon_grid: &[f64], kind: BoundKind) -> Result<ConcentrationReport> {
    let obs = sample_observables(cfg, n_a)?;
    concentration_report(kind, cfg.n, n_a, &obs, epsilon_grid)
}

/// Log-log fit of entropy variance against system size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceFit {
    pub n_values: Vec<usize>,
    pub n_a: usize,
    pub variances: Vec<f64>,
    pub variance_stderrs: Vec<f64>,
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
}

/// Least-squares line through `(ln N, ln Var)`.
pub fn fit_log_log(n_values: &[f64], variances: &[f64]) -> Result<LinearFit> {
    if n_values.len() < 3 {
        return validation(format!("need at least 3 system sizes, got {}", n_values.len()));
    }
    if variances.iter().any(|&v| !(v > 0.0)) || n_values.iter().any(|&n| !(n > 0.0)) {
        return validation("log-log fit needs positive values");
    }
    let x: Vec<f64> = n_values.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = variances.iter().map(|v| v.ln()).collect();
    linear_fit(&x, &y)
}

/// Entropy variance at fixed `N_A` for each `N`, and its fitted exponent.
pub fn variance_scaling(n_values: &[usize], n_a: usize, samples: usize, seed: u64) -> Result<VarianceFit> {
    if n_values.len() < 3 {
        return validation(format!("need at least 3 system sizes, got {}", n_values.len()));
    }
    if let Some(&bad) = n_values.iter().find(|&&n| n < 2 * n_a) {
        return validation(format!("N = {bad} is below 2 N_A = {}", 2 * n_a));
    }
    let mut variances = Vec::with_capacity(n_values.len());
    let mut errs = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let cfg = EnsembleConfig::half_filling(n, samples, seed)?;
        let s: Vec<f64> = sample_entropies(&cfg, &[n_a])?.into_iter().map(|r| r[0]).collect();
        variances.push(Summary::of(&s).variance);
        errs.push(Summary::variance_stderr(&s));
    }
    let ns: Vec<f64> = n_values.iter().map(|&n| n as f64).collect();
    let fit = fit_log_log(&ns, &variances)?;
    Ok(VarianceFit {
        n_values: n_values.to_vec(),
        n_a,
        variances,
        variance_stderrs: errs,
        slope: fit.slope,
        slope_stderr: fit.slope_stderr,
        intercept: fit.intercept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_state::{reduce, SubsystemSelection};
    use crate::linalg::C64;
    use crate::stats::ks_two_sample;
    use approx::assert_abs_diff_eq;

    #[test]
    fn config_validation() {
        assert!(EnsembleConfig::new(4, 5, 10, 0).is_err());
        assert!(EnsembleConfig::new(4, 2, 0, 0).is_err());
        assert!(EnsembleConfig::new(0, 0, 1, 0).is_err());
        assert!(EnsembleConfig::new(4, 0, 1, 0).is_ok());
        assert!(EnsembleConfig::half_filling(5, 1, 0).is_err());
    }

    #[test]
    fn full_and_empty_filling() {
        let full = sample_covariance(&EnsembleConfig::new(5, 5, 1, 3).unwrap(), 0).unwrap();
        assert!((full.matrix().as_mat() - Mat::<C64>::identity(5, 5)).norm_l2() < 1e-12);
        let empty = sample_covariance(&EnsembleConfig::new(5, 0, 1, 3).unwrap(), 0).unwrap();
        assert_eq!(empty.matrix().frobenius_norm(), 0.0);
        let empty = sample_reduced(&EnsembleConfig::new(5, 0, 1, 3).unwrap(), 2, 0).unwrap();
        assert_eq!(empty.matrix().frobenius_norm(), 0.0);
    }

    #[test]
    fn samples_are_projectors() {
        let cfg = EnsembleConfig::new(12, 5, 20, 9).unwrap();
        for i in 0..20 {
            let c = sample_covariance(&cfg, i).unwrap();
            assert!(c.purity_deviation() < 1e-8);
            assert_abs_diff_eq!(c.particle_number(), 5.0, epsilon = 1e-8);
            let r = reduce(&c, &SubsystemSelection::prefix(4).unwrap()).unwrap();
            let ev = crate::linalg::eigvalsh(r.matrix()).unwrap();
            assert!(ev[0] > -1e-12 && ev[3] < 1.0 + 1e-12);
        }
    }

    #[test]
    fn alpha_beta_examples() {
        let (a, b) = moment_alpha_beta(4, 2).unwrap();
        assert_abs_diff_eq!(a, 4.0 / 60.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 14.0 / 60.0, epsilon = 1e-15);
        let (a, b) = moment_alpha_beta(2, 1).unwrap();
        assert_abs_diff_eq!(a, 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 / 6.0, epsilon = 1e-15);
        assert!(moment_alpha_beta(1, 1).is_err());
    }

    #[test]
    fn series_rfg_values() {
        assert_eq!(series_rfg(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(series_rfg(0.5).unwrap(), 0.282093, epsilon = 5e-7);
        assert!(series_rfg(0.6).is_err());
        assert!(series_rfg(-0.1).is_err());
    }

    #[test]
    fn full_subsystem_is_pure() {
        let cfg = EnsembleConfig::half_filling(8, 30, 1).unwrap();
        let rows = sample_entropies(&cfg, &[8]).unwrap();
        assert!(rows.iter().all(|r| r[0].abs() < 1e-9));
    }

    #[test]
    fn bound_constants_and_flags() {
        let k = BoundConstants::new(400, 4);
        assert_abs_diff_eq!(k.eta, (16.0f64 / 798.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(k.eta_prime, 0.03, epsilon = 1e-15);
        assert!(k.bound(BoundKind::EntropyTypicality, k.xi * k.xi * 0.5).is_none());
        assert!(k.bound(BoundKind::EntropyTypicality, k.xi * k.xi * 2.0).is_some());
        assert!(!is_violation(1.0, 1.0, 100));
        assert!(!is_violation(1.0, 1.5, 100));
        assert!(is_violation(0.5, 0.1, 10_000));
        assert!(!is_violation(0.1, 0.1, 10_000));
    }

    #[test]
    fn default_grids_cross_from_vacuous_to_binding() {
        for kind in BoundKind::ALL {
            let grid = default_epsilon_grid(kind, 400, 4);
            let k = BoundConstants::new(400, 4);
            let b: Vec<f64> = grid.iter().map(|&e| k.bound(kind, e).unwrap()).collect();
            assert!(b[0] > 1.0 && *b.last().unwrap() < 0.01, "{kind:?}: {b:?}");
        }
    }

    #[test]
    fn report_rejects_bad_grid() {
        let obs = vec![Observables { distance: 0.1, entropy: 1.0 }];
        assert!(concentration_report(BoundKind::CovarianceTypicality, 10, 1, &obs, &[0.0]).is_err());
        assert!(concentration_report(BoundKind::CovarianceTypicality, 10, 1, &[], &[0.1]).is_err());
    }

    #[test]
    fn log_log_harness() {
        let fit = fit_log_log(&[50., 100., 200., 400.], &[3.0; 4]).unwrap();
        assert_abs_diff_eq!(fit.slope, 0.0, epsilon = 1e-12);
        let fit = fit_log_log(&[10., 20., 40.], &[1.0, 0.25, 0.0625]).unwrap();
        assert_abs_diff_eq!(fit.slope, -2.0, epsilon = 1e-12);
        assert!(fit_log_log(&[10., 20.], &[1.0, 2.0]).is_err());
        assert!(variance_scaling(&[10, 20], 2, 10, 0).is_err());
        assert!(variance_scaling(&[2, 20, 40], 2, 10, 0).is_err());
    }

    #[test]
    fn reduced_sampler_matches_full_route_in_law() {
        let cfg = EnsembleConfig::new(10, 4, 3000, 21).unwrap();
        let sel = SubsystemSelection::prefix(3).unwrap();
        let mut full = Vec::new();
        let mut fast = Vec::new();
        for i in 0..cfg.sample_count as u64 {
            full.push(entropy(&reduce(&sample_covariance(&cfg, i).unwrap(), &sel).unwrap()).unwrap());
            fast.push(entropy(&sample_reduced(&cfg, 3, i).unwrap()).unwrap());
        }
        let (_, p) = ks_two_sample(&full, &fast);
        assert!(p > 0.01, "KS rejects equality of samplers, p = {p}");
    }

    #[test]
    fn page_curve_is_deterministic() {
        let cfg = EnsembleConfig::half_filling(16, 50, 5).unwrap();
        let a = rfg_page_curve(&cfg, &[2, 4, 8]).unwrap();
        let b = rfg_page_curve(&cfg, &[8, 4, 2]).unwrap();
        assert_eq!(a.curve, b.curve);
        assert_eq!(a.curve.points.len(), 3);
    }
}
