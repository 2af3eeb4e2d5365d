//! Page curves: long-time-averaged entropies after a quench, the analytic
//! series they are compared with, and the quasi-particle bound.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};
use crate::gaussian_state::{binary_entropy, clamp_eigenvalue};
use crate::linalg::eigvalsh_ref;
use crate::parallel::map_indices;
use crate::quench::{
    density_wave_covariance, sample_time, spec_modes, HamiltonianSpec, OccupationProfile, PhaseClasses, QuenchEvolution, TimeGrid,
    TimeScheme,
};
use crate::rfg::check_half_range;
use crate::stats::Summary;

/// Where a curve's values come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveSource {
    RfgMontecarlo,
    Dynamical,
    SeriesRfg,
    SeriesDyn,
    SeriesAtypical,
    Quasiparticle,
    InteractingReference,
}

impl CurveSource {
    pub const ALL: [CurveSource; 7] = [
        CurveSource::RfgMontecarlo,
        CurveSource::Dynamical,
        CurveSource::SeriesRfg,
        CurveSource::SeriesDyn,
        CurveSource::SeriesAtypical,
        CurveSource::Quasiparticle,
        CurveSource::InteractingReference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveSource::RfgMontecarlo => "rfg-montecarlo",
            CurveSource::Dynamical => "dynamical",
            CurveSource::SeriesRfg => "series-rfg",
            CurveSource::SeriesDyn => "series-dyn",
            CurveSource::SeriesAtypical => "series-atypical",
            CurveSource::Quasiparticle => "quasiparticle",
            CurveSource::InteractingReference => "interacting-reference",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// Mean entropy (bits) at one subsystem size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n_a: usize,
    pub mean: f64,
    pub stderr: f64,
}

/// Entropy against subsystem size for a system of `n` modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageCurve {
    pub n: usize,
    pub source: CurveSource,
    pub model: String,
    pub points: Vec<CurvePoint>,
    /// Order at which a series was cut, when it was.
    pub truncation: Option<String>,
}

impl PageCurve {
    pub fn new(n: usize, source: CurveSource, model: impl Into<String>, points: Vec<CurvePoint>) -> Result<Self> {
        let c = Self { n, source, model: model.into(), points, truncation: None };
        c.validate()?;
        Ok(c)
    }

    pub fn with_truncation(mut self, t: impl Into<String>) -> Self {
        self.truncation = Some(t.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.points.windows(2).all(|w| w[0].n_a < w[1].n_a) {
            return validation("curve points must be sorted by strictly increasing N_A");
        }
        for p in &self.points {
            if p.n_a > self.n {
                return validation(format!("N_A = {} exceeds N = {}", p.n_a, self.n));
            }
            // Truncated series may dip a hair below zero at tiny f.
            let slack = 1e-9 * (1.0 + p.n_a as f64);
            if !(p.mean >= -slack && p.mean <= p.n_a as f64 + slack) {
                return validation(format!("entropy {} at N_A = {} outside [0, N_A]", p.mean, p.n_a));
            }
        }
        Ok(())
    }

    pub fn fractions(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.n_a as f64 / self.n as f64).collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.mean / self.n as f64).collect()
    }

    pub fn point(&self, n_a: usize) -> Option<&CurvePoint> {
        self.points.iter().find(|p| p.n_a == n_a)
    }
}

/// Long-time averages of `Tr X_A^p`, `p = 1 … 6`, at one subsystem size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub n: usize,
    pub n_a: usize,
    pub f: f64,
    /// Mean of `Tr X^p` at index `p − 1`.
    pub means: [f64; 6],
    pub stderrs: [f64; 6],
}

impl MomentSet {
    pub fn tr_x2(&self) -> f64 {
        self.means[1]
    }
    pub fn tr_x3(&self) -> f64 {
        self.means[2]
    }
    pub fn tr_x4(&self) -> f64 {
        self.means[3]
    }
    pub fn tr_x6(&self) -> f64 {
        self.means[5]
    }
}

/// Everything one pass over the time grid produces.
#[derive(Clone, Debug)]
pub struct DynamicalAverage {
    pub curve: PageCurve,
    pub moments: Vec<MomentSet>,
    /// Entropy per time sample, `[size][sample]`.
    pub entropies: Vec<Vec<f64>>,
}

/// Number of per-size values computed at each time: entropy and `Tr X^1…6`.
const PER_SIZE: usize = 7;

fn block_observables(block: faer::MatRef<'_, crate::linalg::C64>) -> Result<[f64; PER_SIZE]> {
    let mut out = [0.0; PER_SIZE];
    for v in eigvalsh_ref(block)? {
        let lam = clamp_eigenvalue(v).map_err(|_| crate::error::Error::Invariant {
            name: "covariance-spectrum",
            detail: format!("evolved covariance eigenvalue {v} outside [0, 1]"),
        })?;
        out[0] += binary_entropy(lam);
        let x = 2.0 * lam - 1.0;
        let mut xp = 1.0;
        for slot in out.iter_mut().skip(1) {
            xp *= x;
            *slot += xp;
        }
    }
    Ok(out)
}

/// Entropies and moments of the first `N_A` sites, averaged over the grid.
pub fn dynamical_average(spec: &HamiltonianSpec, grid: &TimeGrid, subsystem_sizes: &[usize]) -> Result<DynamicalAverage> {
    grid.validate()?;
    let n = spec.n;
    let mut sizes = subsystem_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return validation("no subsystem sizes given");
    }
    if let Some(&bad) = sizes.iter().find(|&&k| k == 0 || k > n) {
        return validation(format!("subsystem size {bad} outside [1, {n}]"));
    }
    let n_max = *sizes.last().unwrap();
    let modes = spec_modes(spec)?;
    let classes = PhaseClasses::new(&modes);
    let evo = QuenchEvolution::new(modes.basis, &density_wave_covariance(n)?)?;
    let rows: Vec<Vec<[f64; PER_SIZE]>> = map_indices(grid.samples, |i| {
        let phases = match grid.scheme {
            TimeScheme::UniformWindow => evo.phases_at(sample_time(grid, i as u64)),
            TimeScheme::FrequencyPhaseEnsemble => classes.sample(grid.seed, i as u64),
        };
        let c = evo.reduced(&phases, n_max)?;
        sizes.iter().map(|&k| block_observables(c.as_mat().submatrix(0, 0, k, k))).collect()
    })?;

    let mut points = Vec::with_capacity(sizes.len());
    let mut moments = Vec::with_capacity(sizes.len());
    let mut entropies = Vec::with_capacity(sizes.len());
    for (j, &k) in sizes.iter().enumerate() {
        let column = |q: usize| -> Vec<f64> { rows.iter().map(|r| r[j][q]).collect() };
        let s = column(0);
        let summary = Summary::of(&s);
        points.push(CurvePoint { n_a: k, mean: summary.mean, stderr: summary.stderr });
        let mut means = [0.0; 6];
        let mut stderrs = [0.0; 6];
        for p in 0..6 {
            let m = Summary::of(&column(p + 1));
            means[p] = m.mean;
            stderrs[p] = m.stderr;
        }
        moments.push(MomentSet { n, n_a: k, f: k as f64 / n as f64, means, stderrs });
        entropies.push(s);
    }
    let curve = PageCurve::new(n, CurveSource::Dynamical, model_label(spec), points)?;
    Ok(DynamicalAverage { curve, moments, entropies })
}

/// Short description of a Hamiltonian for curve metadata.
pub fn model_label(spec: &HamiltonianSpec) -> String {
    let terms: Vec<String> = spec
        .hoppings
        .iter()
        .map(|h| {
            let (e, o) = (h.even.value(), h.odd.value());
            let fmt = |c: crate::linalg::C64| if c.im == 0.0 { format!("{}", c.re) } else { format!("{}{:+}i", c.re, c.im) };
            format!("r{}:{}/{}", h.range, fmt(e), fmt(o))
        })
        .collect();
    format!("N={} [{}]", spec.n, terms.join(" "))
}

/// Long-time-averaged entropy of the first `N_A` sites for each size.
pub fn dynamical_page_curve(spec: &HamiltonianSpec, grid: &TimeGrid, subsystem_sizes: &[usize]) -> Result<PageCurve> {
    Ok(dynamical_average(spec, grid, subsystem_sizes)?.curve)
}

/// Truncated dynamical Page curve density `f − (f²/2 + f³/6 + f⁴/10)/ln 2`;
/// the dropped terms are `O(f⁵)`.
pub fn series_dyn(f: f64) -> Result<f64> {
    check_half_range(f)?;
    Ok(f - (f * f / 2.0 + f.powi(3) / 6.0 + f.powi(4) / 10.0) / LN_2)
}

/// Closed-form long-time average of `Tr X_A^{2n}` at half filling, for a
/// model with every occupation at ½.
///
/// `n = 3` exists only for `N_A ≤ N/2` and `N_A = N`.
pub fn moment_prediction(n: u32, big_n: usize, n_a: usize) -> Result<f64> {
    if big_n == 0 || n_a == 0 || n_a > big_n {
        return validation(format!("need 1 <= N_A <= N, got N_A = {n_a}, N = {big_n}"));
    }
    let (nn, a) = (big_n as f64, n_a as f64);
    match n {
        1 => Ok(a * a / nn),
        2 => Ok(2.0 * a.powi(3) / nn.powi(2) - a.powi(4) / nn.powi(3)),
        3 if 2 * n_a <= big_n => Ok(5.5 * a.powi(4) / nn.powi(3) - 8.0 * a.powi(5) / nn.powi(4) + 4.0 * a.powi(6) / nn.powi(5)),
        3 if n_a == big_n => Ok(6.0 * a.powi(4) / nn.powi(3) - 9.0 * a.powi(5) / nn.powi(4) + 4.0 * a.powi(6) / nn.powi(5)),
        3 => validation(format!("Tr X^6 formula is only defined for N_A <= N/2 or N_A = N (got N_A = {n_a}, N = {big_n})")),
        _ => validation(format!("moment order n = {n} not in 1..=3")),
    }
}

/// `N_A − Tr X²/(2 ln 2) − Tr X⁴/(12 ln 2)`: the entropy series cut after the
/// fourth moment.
pub fn truncated_entropy(n_a: usize, tr_x2: f64, tr_x4: f64) -> f64 {
    n_a as f64 - tr_x2 / (2.0 * LN_2) - tr_x4 / (12.0 * LN_2)
}

/// Long-time averages of `Tr C_A^p`, `p = 1 … 4`, from the conserved
/// occupations.
pub fn atypical_trace_powers(profile: &OccupationProfile, big_n: usize, n_a: usize) -> Result<[f64; 4]> {
    profile.check()?;
    if profile.n != big_n {
        return validation(format!("profile is for N = {}, not {big_n}", profile.n));
    }
    if n_a == 0 || 2 * n_a > big_n {
        return validation(format!("atypical series needs 1 <= N_A <= N/2, got {n_a}"));
    }
    let r = n_a as f64 / big_n as f64;
    let sum = |f: &dyn Fn(f64, f64) -> f64| -> f64 { profile.occupations.iter().zip(&profile.eta).map(|(&n, &e)| f(n, e)).sum() };
    let (s_n, s_n2, s_n3, s_n4) = (sum(&|n, _| n), sum(&|n, _| n * n), sum(&|n, _| n.powi(3)), sum(&|n, _| n.powi(4)));
    let (s_e2, s_ne2, s_n2e2, s_e4) = (sum(&|_, e| e * e), sum(&|n, e| n * e * e), sum(&|n, e| n * n * e * e), sum(&|_, e| e.powi(4)));
    let tr1 = r * s_n;
    let tr2 = r * s_n2 + r * r * s_e2;
    let tr3 = r * s_n3 + 3.0 * r * r * s_ne2;
    let tr4 = r * s_n4 + 4.0 * r * r * s_n2e2 + 2.0 * r * r * s_e4 + 2.0 * r.powi(3) * s_e4 - r.powi(4) * s_e4;
    Ok([tr1, tr2, tr3, tr4])
}

/// Entropy prediction for a general model, including ones whose
/// occupations leave ½, truncated at `Tr X_A⁴`.
///
/// Built from the averaged `Tr C_A^p` through `X = 2C − I`, so the result
/// keeps every power of `N_A/N` produced by the fourth moment.
pub fn series_atypical(profile: &OccupationProfile, big_n: usize, n_a: usize) -> Result<f64> {
    let [c1, c2, c3, c4] = atypical_trace_powers(profile, big_n, n_a)?;
    let a = n_a as f64;
    let x2 = 4.0 * c2 - 4.0 * c1 + a;
    let x4 = 16.0 * c4 - 32.0 * c3 + 24.0 * c2 - 8.0 * c1 + a;
    Ok(truncated_entropy(n_a, x2, x4))
}

/// Quasi-particle entropy `(N_A/N − N_A²/N²) Σ_k H(n_k)` over all `N` modes.
pub fn quasiparticle_entropy(profile: &OccupationProfile, big_n: usize, n_a: usize) -> Result<f64> {
    if profile.n != big_n {
        return validation(format!("profile is for N = {}, not {big_n}", profile.n));
    }
    if n_a > big_n {
        return validation(format!("N_A = {n_a} exceeds N = {big_n}"));
    }
    let r = n_a as f64 / big_n as f64;
    let total: f64 = profile.occupations.iter().map(|&n| binary_entropy(n)).sum();
    Ok((r - r * r) * total)
}

/// Saturated interacting Page curve density `min(f, 1 − f)`.
///
/// `_n` is accepted for symmetry with the finite-size curves; the reference
/// line itself is the thermodynamic limit.
pub fn interacting_reference(f: f64, _n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&f) {
        return validation(format!("fraction {f} outside [0, 1]"));
    }
    Ok(f.min(1.0 - f))
}

/// Evaluates an analytic density curve at each size (points with no stderr).
pub fn series_curve(source: CurveSource, n: usize, sizes: &[usize], eval: impl Fn(f64) -> Result<f64>) -> Result<PageCurve> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let points = sizes
        .iter()
        .map(|&k| Ok(CurvePoint { n_a: k, mean: eval(k as f64 / n as f64)? * n as f64, stderr: 0.0 }))
        .collect::<Result<Vec<_>>>()?;
    PageCurve::new(n, source, source.name(), points)
}

/// Atypical-series curve for a profile.
pub fn atypical_curve(profile: &OccupationProfile, sizes: &[usize]) -> Result<PageCurve> {
    let n = profile.n;
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let points =
        sizes.iter().map(|&k| Ok(CurvePoint { n_a: k, mean: series_atypical(profile, n, k)?, stderr: 0.0 })).collect::<Result<Vec<_>>>()?;
    Ok(PageCurve::new(n, CurveSource::SeriesAtypical, "series-atypical", points)?.with_truncation("Tr X^4"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rfg::series_rfg;
    use approx::assert_abs_diff_eq;

    #[test]
    fn series_dyn_values() {
        assert_eq!(series_dyn(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(series_dyn(0.5).unwrap(), 0.280590, epsilon = 5e-7);
        assert_abs_diff_eq!(series_dyn(0.5).unwrap() - series_rfg(0.5).unwrap(), -1.5028e-3, epsilon = 1e-7);
        for i in 0..=50 {
            let f = i as f64 / 100.0;
            let gap = series_rfg(f).unwrap() - series_dyn(f).unwrap();
            assert_abs_diff_eq!(gap, f.powi(4) / (60.0 * LN_2), epsilon = 1e-15);
        }
        assert!(series_dyn(0.51).is_err());
    }

    #[test]
    fn moment_examples() {
        assert_abs_diff_eq!(moment_prediction(1, 200, 200).unwrap(), 200.0, epsilon = 1e-12);
        assert_abs_diff_eq!(moment_prediction(2, 200, 200).unwrap(), 200.0, epsilon = 1e-12);
        assert_abs_diff_eq!(moment_prediction(3, 200, 200).unwrap(), 200.0, epsilon = 1e-10);
        assert_abs_diff_eq!(moment_prediction(2, 200, 50).unwrap(), 5.46875, epsilon = 1e-12);
        assert_abs_diff_eq!(moment_prediction(1, 200, 50).unwrap(), 12.5, epsilon = 1e-12);
        assert!(moment_prediction(3, 200, 150).is_err());
        assert!(moment_prediction(3, 200, 100).is_ok());
        assert!(moment_prediction(4, 200, 10).is_err());
        assert!(moment_prediction(1, 200, 0).is_err());
        assert!(moment_prediction(1, 200, 201).is_err());
    }

    #[test]
    fn atypical_collapses_for_half_occupations() {
        let p = OccupationProfile::from_lower(200, &[0.5; 100]).unwrap();
        let s = series_atypical(&p, 200, 20).unwrap();
        let want = truncated_entropy(20, moment_prediction(1, 200, 20).unwrap(), moment_prediction(2, 200, 20).unwrap());
        assert_abs_diff_eq!(s, want, epsilon = 1e-10);
    }

    #[test]
    fn atypical_local_limit() {
        // η = 0 leaves only the N_A/N terms; with n_k ∈ {0, 1} those reduce
        // C_A to an average of projectors: Tr C^p = N_A/2 for every p.
        let lower: Vec<f64> = (0..50).map(|i| (i % 2) as f64).collect();
        let p = OccupationProfile::from_lower(100, &lower).unwrap();
        let [c1, c2, c3, c4] = atypical_trace_powers(&p, 100, 10).unwrap();
        for c in [c1, c2, c3, c4] {
            assert_abs_diff_eq!(c, 5.0, epsilon = 1e-12);
        }
        let s = series_atypical(&p, 100, 10).unwrap();
        assert_abs_diff_eq!(s, 10.0 - 10.0 / (2.0 * LN_2) - 10.0 / (12.0 * LN_2), epsilon = 1e-12);
    }

    #[test]
    fn atypical_validation() {
        let p = OccupationProfile::from_lower(20, &[0.5; 10]).unwrap();
        assert!(series_atypical(&p, 20, 11).is_err());
        assert!(series_atypical(&p, 22, 5).is_err());
    }

    #[test]
    fn quasiparticle_examples() {
        let p = OccupationProfile::from_lower(100, &[0.5; 50]).unwrap();
        assert_abs_diff_eq!(quasiparticle_entropy(&p, 100, 30).unwrap(), 21.0, epsilon = 1e-12);
        assert_eq!(quasiparticle_entropy(&p, 100, 100).unwrap(), 0.0);
        assert!(quasiparticle_entropy(&p, 100, 101).is_err());
    }

    #[test]
    fn interacting_examples() {
        assert_eq!(interacting_reference(0.3, 100).unwrap(), 0.3);
        assert_eq!(interacting_reference(0.5, 100).unwrap(), 0.5);
        assert_abs_diff_eq!(interacting_reference(0.7, 100).unwrap(), 0.3, epsilon = 1e-15);
        assert!(interacting_reference(1.1, 100).is_err());
    }

    #[test]
    fn curve_validation() {
        let pt = |n_a, mean| CurvePoint { n_a, mean, stderr: 0.0 };
        assert!(PageCurve::new(10, CurveSource::Dynamical, "x", vec![pt(2, 1.0), pt(1, 0.5)]).is_err());
        assert!(PageCurve::new(10, CurveSource::Dynamical, "x", vec![pt(2, 3.0)]).is_err());
        assert!(PageCurve::new(10, CurveSource::Dynamical, "x", vec![pt(11, 1.0)]).is_err());
        assert!(PageCurve::new(10, CurveSource::Dynamical, "x", vec![pt(1, 0.5), pt(2, 1.0)]).is_ok());
        for s in CurveSource::ALL {
            assert_eq!(CurveSource::parse(s.name()), Some(s));
        }
    }

    #[test]
    fn small_dynamical_curve() {
        let spec = HamiltonianSpec::minimal(16).unwrap();
        let grid = TimeGrid::uniform(100.0, 1000.0, 64, 1).unwrap();
        let avg = dynamical_average(&spec, &grid, &[16, 4, 8]).unwrap();
        assert_eq!(avg.curve.points.iter().map(|p| p.n_a).collect::<Vec<_>>(), vec![4, 8, 16]);
        assert!(avg.curve.points[2].mean.abs() < 1e-9);
        for m in &avg.moments {
            assert!(m.tr_x6() <= m.tr_x4() + 1e-12 && m.tr_x4() <= m.tr_x2() + 1e-12);
        }
        let again = dynamical_average(&spec, &grid, &[4, 8, 16]).unwrap();
        assert_eq!(avg.curve, again.curve);
    }

    #[test]
    fn phase_ensemble_scheme_runs() {
        let spec = HamiltonianSpec::minimal(16).unwrap();
        let grid = TimeGrid { scheme: TimeScheme::FrequencyPhaseEnsemble, t_min: 0.0, t_max: 1.0, samples: 64, seed: 2 };
        let c = dynamical_page_curve(&spec, &grid, &[4, 8]).unwrap();
        assert_eq!(c.points.len(), 2);
    }
}
