//! Period-2 tight-binding chains on a ring: the single-particle matrix,
//! covariance evolution after a quench from the density wave, and the
//! conserved occupations of the eigenmodes.

use std::f64::consts::PI;

use faer::{Mat, Side};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::gaussian_state::CovarianceMatrix;
use crate::linalg::{eigh, HermitianMatrix, C64};
use crate::rng::{stream, Domain};

/// Splitting below which a 2×2 momentum block counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;
/// Tolerance on `|n_k − ½|` for the all-half verdict.
pub const HALF_TOL: f64 = 1e-9;
/// Frequencies closer than this share a phase class.
pub const FREQUENCY_TOL: f64 = 1e-9;
/// Eigenvalues of `C₀` below this are dropped from its factorization.
const FACTOR_CUTOFF: f64 = 1e-14;

/// Complex amplitude written either as a real number or as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn value(self) -> C64 {
        match self {
            Amplitude::Real(r) => C64::new(r, 0.0),
            Amplitude::Complex([re, im]) => C64::new(re, im),
        }
    }
}

impl From<f64> for Amplitude {
    fn from(v: f64) -> Self {
        Amplitude::Real(v)
    }
}

/// Term `amp(j) a_j† a_{j+range} + h.c.` for every site `j`, with `amp`
/// chosen by the parity of `j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hopping {
    pub range: usize,
    pub even: Amplitude,
    pub odd: Amplitude,
}

impl Hopping {
    pub fn uniform(range: usize, amp: f64) -> Self {
        Self { range, even: amp.into(), odd: amp.into() }
    }

    pub fn staggered(range: usize, even: f64, odd: f64) -> Self {
        Self { range, even: even.into(), odd: odd.into() }
    }
}

/// Period-2 translation-invariant hopping Hamiltonian on `n` sites with
/// periodic boundaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianSpec {
    pub n: usize,
    #[serde(default)]
    pub hoppings: Vec<Hopping>,
}

impl HamiltonianSpec {
    pub fn new(n: usize, hoppings: Vec<Hopping>) -> Result<Self> {
        let spec = Self { n, hoppings };
        spec.validate()?;
        Ok(spec)
    }

    /// Uniform nearest-neighbour hopping, `E_k = 2 cos k`.
    pub fn minimal(n: usize) -> Result<Self> {
        Self::new(n, vec![Hopping::uniform(1, 1.0)])
    }

    /// Minimal model plus range-3 hopping `+j` on even and `−j` on odd sites.
    pub fn odd_range(n: usize, j: f64) -> Result<Self> {
        Self::new(n, vec![Hopping::uniform(1, 1.0), Hopping::staggered(3, j, -j)])
    }

    /// Minimal model plus range-2 hopping `+j` on even and `−j` on odd sites.
    pub fn even_range(n: usize, j: f64) -> Result<Self> {
        Self::new(n, vec![Hopping::uniform(1, 1.0), Hopping::staggered(2, j, -j)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return validation(format!("period-2 chain needs even N >= 2, got {}", self.n));
        }
        for h in &self.hoppings {
            // Any 1 <= r < N is accepted; "short range" is not enforced.
            if h.range == 0 || h.range >= self.n {
                return validation(format!("hopping range {} outside [1, {})", h.range, self.n));
            }
            for a in [h.even.value(), h.odd.value()] {
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return validation(format!("non-finite hopping amplitude {a}"));
                }
            }
        }
        Ok(())
    }
}

/// `h` with `h_{j, j+r mod N} += amp(j)` and the conjugate entry, summed over
/// all hopping terms.
pub fn build_single_particle(spec: &HamiltonianSpec) -> Result<HermitianMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut m = Mat::<C64>::zeros(n, n);
    for h in &spec.hoppings {
        for j in 0..n {
            let amp = if j % 2 == 0 { h.even.value() } else { h.odd.value() };
            let k = (j + h.range) % n;
            m[(j, k)] += amp;
            m[(k, j)] += amp.conj();
        }
    }
    HermitianMatrix::new(m)
}

/// `diag(1, 0, 1, 0, …)`: even sites occupied.
pub fn density_wave_covariance(n: usize) -> Result<CovarianceMatrix> {
    if n == 0 || !n.is_multiple_of(2) {
        return validation(format!("density wave needs even N >= 2, got {n}"));
    }
    let diag: Vec<f64> = (0..n).map(|j| if j % 2 == 0 { 1.0 } else { 0.0 }).collect();
    CovarianceMatrix::from_real_diagonal(&diag)
}

/// Orthonormal eigenmodes of `h` (as columns) with their energies.
#[derive(Clone, Debug)]
pub struct ModeBasis {
    pub vectors: Mat<C64>,
    pub energies: Vec<f64>,
}

impl ModeBasis {
    pub fn from_hamiltonian(h: &HermitianMatrix) -> Result<Self> {
        let e = eigh(h)?;
        Ok(Self { vectors: e.vectors.as_mat().to_owned(), energies: e.values })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

/// Covariance evolution `C(φ) = W C₀ W†`, `W = conj(V) diag(e^{iφ}) Vᵀ`,
/// where `V` holds the eigenmodes of `h`. With `φ_a = E_a t` this is the
/// Heisenberg evolution of `⟨a_j† a_k⟩` under `e^{−iHt}`.
#[derive(Clone, Debug)]
pub struct QuenchEvolution {
    basis: ModeBasis,
    v_conj: Mat<C64>,
    /// `Vᵀ L` with `C₀ = L L†`.
    b: Mat<C64>,
}

impl QuenchEvolution {
    pub fn new(basis: ModeBasis, c0: &CovarianceMatrix) -> Result<Self> {
        let n = basis.dim();
        if c0.dim() != n {
            return validation(format!("C0 has dim {}, Hamiltonian {}", c0.dim(), n));
        }
        let e = eigh(c0.matrix())?;
        let keep: Vec<usize> = (0..n).filter(|&i| e.values[i] > FACTOR_CUTOFF).collect();
        let vec = e.vectors.as_mat();
        let l = Mat::from_fn(n, keep.len(), |i, c| vec[(i, keep[c])] * e.values[keep[c]].min(1.0).sqrt());
        let v_conj = Mat::from_fn(n, n, |i, j| basis.vectors[(i, j)].conj());
        let b = basis.vectors.transpose() * &l;
        Ok(Self { basis, v_conj, b })
    }

    pub fn for_spec(spec: &HamiltonianSpec) -> Result<Self> {
        Self::new(spec_modes(spec)?.basis, &density_wave_covariance(spec.n)?)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// `φ_a = E_a t`.
    pub fn phases_at(&self, t: f64) -> Vec<f64> {
        self.basis.energies.iter().map(|e| e * t).collect()
    }

    fn factor_rows(&self, phases: &[f64], rows: usize) -> Mat<C64> {
        let db = Mat::from_fn(self.b.nrows(), self.b.ncols(), |a, c| C64::from_polar(1.0, phases[a]) * self.b[(a, c)]);
        self.v_conj.as_ref().submatrix(0, 0, rows, self.dim()) * db
    }

    /// Leading `n_max × n_max` block of `C(φ)`.
    pub fn reduced(&self, phases: &[f64], n_max: usize) -> Result<HermitianMatrix> {
        if phases.len() != self.dim() || n_max == 0 || n_max > self.dim() {
            return validation("phase vector or block size does not match the system");
        }
        let y = self.factor_rows(phases, n_max);
        Ok(HermitianMatrix::symmetrized(&y * y.adjoint()))
    }

    /// Full `C(φ)`.
    pub fn covariance(&self, phases: &[f64]) -> Result<CovarianceMatrix> {
        let c = self.reduced(phases, self.dim())?;
        Ok(CovarianceMatrix::new_unchecked(c))
    }

    pub fn at(&self, t: f64) -> Result<CovarianceMatrix> {
        self.covariance(&self.phases_at(t))
    }
}

/// `C(t)` for `H = Σ h_jk a_j† a_k` from `C(0) = c0`.
pub fn evolve_covariance(h: &HermitianMatrix, c0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
    if h.dim() != c0.dim() {
        return validation(format!("dimension mismatch: h is {}, C0 is {}", h.dim(), c0.dim()));
    }
    QuenchEvolution::new(ModeBasis::from_hamiltonian(h)?, c0)?.at(t)
}

/// `G_{kk'} = ⟨a_k† a_k'⟩` with `a_k† = N^{−1/2} Σ_j e^{−ikj} a_j†` and
/// `k = 2πn/N`, `n = 0 … N−1`.
pub fn momentum_correlator(c: &CovarianceMatrix) -> Mat<C64> {
    let n = c.dim();
    let norm = (n as f64).sqrt().recip();
    let f = Mat::from_fn(n, n, |k, j| C64::from_polar(norm, -2.0 * PI * (k * j % n) as f64 / n as f64));
    &f * c.matrix().as_mat() * f.adjoint()
}

/// One reduced-zone momentum block.
#[derive(Clone, Debug)]
pub struct MomentumBlock {
    pub k: f64,
    /// Lower (`Q_k`) and upper (`P_k`) energies.
    pub energies: [f64; 2],
    /// Eigenvectors in the (even-sublattice, odd-sublattice) basis.
    pub vectors: [[C64; 2]; 2],
    pub degenerate: bool,
}

/// Block diagonalization of a period-2 Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpecModes {
    pub blocks: Vec<MomentumBlock>,
    /// Columns ordered `Q_{k_0}, P_{k_0}, Q_{k_1}, …`.
    pub basis: ModeBasis,
}

fn sublattice_wave(n: usize, parity: usize, k: f64) -> Vec<C64> {
    let amp = (2.0 / n as f64).sqrt();
    (0..n).map(|j| if j % 2 == parity { C64::from_polar(amp, -k * j as f64) } else { C64::new(0.0, 0.0) }).collect()
}

/// Block diagonalizes `h` in the sublattice plane waves
/// `e_{s,k}(j) = √(2/N) e^{−ikj}` on sites of parity `s`, `k = 2πn/N`,
/// `n < N/2`.
pub fn spec_modes(spec: &HamiltonianSpec) -> Result<SpecModes> {
    let h = build_single_particle(spec)?;
    let n = spec.n;
    let hm = h.as_mat();
    let mut blocks = Vec::with_capacity(n / 2);
    let mut vectors = Mat::<C64>::zeros(n, n);
    let mut energies = Vec::with_capacity(n);
    for idx in 0..n / 2 {
        let k = 2.0 * PI * idx as f64 / n as f64;
        let waves = [sublattice_wave(n, 0, k), sublattice_wave(n, 1, k)];
        let cols = Mat::from_fn(n, 2, |j, s| waves[s][j]);
        let block = cols.adjoint() * hm * &cols;
        let block = HermitianMatrix::new(block.clone())
            .map_err(|_| Error::Invariant { name: "period-2-block", detail: format!("momentum block at k = {k} is not Hermitian") })?;
        let evd = block.as_mat().self_adjoint_eigen(Side::Lower).map_err(|e| Error::Numerical(format!("2x2 block at k = {k}: {e:?}")))?;
        let (u, s) = (evd.U(), evd.S());
        let e = [s[0].re, s[1].re];
        let v = [[u[(0, 0)], u[(1, 0)]], [u[(0, 1)], u[(1, 1)]]];
        let modes = &cols * u;
        for a in 0..2 {
            for j in 0..n {
                vectors[(j, 2 * idx + a)] = modes[(j, a)];
            }
            energies.push(e[a]);
        }
        blocks.push(MomentumBlock { k, energies: e, vectors: v, degenerate: (e[1] - e[0]).abs() < DEGENERACY_TOL });
    }
    // The block modes must diagonalize h itself; otherwise the spec is not
    // block diagonal in this basis.
    let resid = hm * &vectors - Mat::from_fn(n, n, |j, a| vectors[(j, a)] * energies[a]);
    if resid.norm_l2() > 1e-9 * (1.0 + h.frobenius_norm()) {
        return validation("Hamiltonian is not period-2 block diagonal");
    }
    Ok(SpecModes { blocks, basis: ModeBasis { vectors, energies } })
}

/// Conserved eigenmode occupations in the density-wave initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OccupationProfile {
    pub n: usize,
    /// `k` for the `Q_k` modes followed by `k + π` for the `P_k` modes.
    pub momenta: Vec<f64>,
    pub occupations: Vec<f64>,
    pub eta: Vec<f64>,
    /// Per momentum; degenerate blocks are left out of the verdict.
    pub degenerate: Vec<bool>,
    pub theorem2_satisfied: bool,
}

impl OccupationProfile {
    /// Profile from `N/2` lower-mode occupations `n_k`; the upper modes get
    /// `1 − n_k`.
    pub fn from_lower(n: usize, lower: &[f64]) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) || lower.len() != n / 2 {
            return validation(format!("need N/2 = {} occupations for even N = {n}", n / 2));
        }
        let mut occ = lower.to_vec();
        occ.extend(lower.iter().map(|x| 1.0 - x));
        Self::from_parts(n, occ, vec![false; n])
    }

    fn from_parts(n: usize, occupations: Vec<f64>, degenerate: Vec<bool>) -> Result<Self> {
        let half = n / 2;
        let mut momenta: Vec<f64> = (0..half).map(|i| 2.0 * PI * i as f64 / n as f64).collect();
        momenta.extend((0..half).map(|i| 2.0 * PI * i as f64 / n as f64 + PI));
        if let Some(bad) = occupations.iter().find(|x| !(-1e-12..=1.0 + 1e-12).contains(*x)) {
            return validation(format!("occupation {bad} outside [0, 1]"));
        }
        let occupations: Vec<f64> = occupations.iter().map(|x| x.clamp(0.0, 1.0)).collect();
        let eta = occupations.iter().map(|x| (x * (1.0 - x)).sqrt()).collect();
        let theorem2_satisfied = (0..n).filter(|&i| !degenerate[i]).all(|i| (occupations[i] - 0.5).abs() < HALF_TOL);
        let p = Self { n, momenta, occupations, eta, degenerate, theorem2_satisfied };
        p.check()?;
        Ok(p)
    }

    /// Half-filling relation `n_{k+π} = 1 − n_k`.
    pub fn check(&self) -> Result<()> {
        let half = self.n / 2;
        if self.occupations.len() != self.n || self.eta.len() != self.n {
            return validation("occupation profile has the wrong length");
        }
        for i in 0..half {
            let s = self.occupations[i] + self.occupations[i + half];
            if (s - 1.0).abs() > 1e-9 {
                return validation(format!("n_k + n_(k+pi) = {s} at k index {i}, expected 1"));
            }
        }
        Ok(())
    }

    /// Largest `|n_k − ½|` over non-degenerate modes.
    pub fn max_deviation(&self) -> f64 {
        (0..self.n).filter(|&i| !self.degenerate[i]).map(|i| (self.occupations[i] - 0.5).abs()).fold(0.0, f64::max)
    }
}

/// Occupation `n = |v_E|²`-style projection `vᵀ C₀ conj(v)` for each block
/// eigenmode. A degenerate block has no preferred eigenbasis, so it reports
/// the spectrum of `C₀` restricted to the block, and is excluded from the
/// all-half occupation verdict.
pub fn conserved_occupations(spec: &HamiltonianSpec) -> Result<OccupationProfile> {
    let modes = spec_modes(spec)?;
    let n = spec.n;
    let c0 = density_wave_covariance(n)?;
    let c = c0.matrix().as_mat();
    let half = n / 2;
    let mut occ = vec![0.0; n];
    let mut degenerate = vec![false; n];
    for (i, b) in modes.blocks.iter().enumerate() {
        let waves = [sublattice_wave(n, 0, b.k), sublattice_wave(n, 1, b.k)];
        // C₀ in the block basis: ⟨b_α† b_β⟩ with b_α† = Σ_j e_α(j) a_j†.
        let mut cb = Mat::<C64>::zeros(2, 2);
        for a in 0..2 {
            for bb in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..n {
                    for l in 0..n {
                        let cjl = c[(j, l)];
                        if cjl != C64::new(0.0, 0.0) {
                            acc += waves[a][j] * cjl * waves[bb][l].conj();
                        }
                    }
                }
                cb[(a, bb)] = acc;
            }
        }
        let (nq, np) = if b.degenerate {
            let ev = HermitianMatrix::symmetrized(cb)
                .as_mat()
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Numerical(format!("{e:?}")))?;
            degenerate[i] = true;
            degenerate[i + half] = true;
            (ev[1], ev[0])
        } else {
            let occ_of = |v: [C64; 2]| -> f64 {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..2 {
                    for bb in 0..2 {
                        acc += v[a] * cb[(a, bb)] * v[bb].conj();
                    }
                }
                acc.re
            };
            (occ_of(b.vectors[0]), occ_of(b.vectors[1]))
        };
        occ[i] = nq;
        occ[i + half] = np;
    }
    OccupationProfile::from_parts(n, occ, degenerate)
}

/// How the long-time average is realized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeScheme {
    /// Uniform random times in `[t_min, t_max]`.
    UniformWindow,
    /// Independent uniform phases per class of equal block frequency.
    /// Exact only when the distinct frequencies are rationally independent.
    FrequencyPhaseEnsemble,
}

/// Sampling plan for the long-time average.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub scheme: TimeScheme,
    pub t_min: f64,
    pub t_max: f64,
    pub samples: usize,
    pub seed: u64,
}

impl TimeGrid {
    /// Default window `[10³, 10⁴]` with 4096 times.
    pub const DEFAULT_T_MIN: f64 = 1e3;
    pub const DEFAULT_T_MAX: f64 = 1e4;
    pub const DEFAULT_SAMPLES: usize = 4096;

    pub fn uniform(t_min: f64, t_max: f64, samples: usize, seed: u64) -> Result<Self> {
        let g = Self { scheme: TimeScheme::UniformWindow, t_min, t_max, samples, seed };
        g.validate()?;
        Ok(g)
    }

    pub fn default_with_seed(seed: u64) -> Self {
        Self {
            scheme: TimeScheme::UniformWindow,
            t_min: Self::DEFAULT_T_MIN,
            t_max: Self::DEFAULT_T_MAX,
            samples: Self::DEFAULT_SAMPLES,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min >= 0.0 && self.t_min < self.t_max && self.t_max.is_finite()) {
            return validation(format!("time window [{}, {}] must satisfy 0 <= t_min < t_max", self.t_min, self.t_max));
        }
        if self.samples == 0 {
            return validation("time grid needs at least one sample");
        }
        Ok(())
    }
}

/// Time of sample `i` under the uniform-window scheme.
pub fn sample_time(grid: &TimeGrid, i: u64) -> f64 {
    let u: f64 = stream(grid.seed, Domain::TimeGrid, i).random();
    grid.t_min + (grid.t_max - grid.t_min) * u
}

/// All `M` sample times of a uniform-window grid.
pub fn sample_times(grid: &TimeGrid) -> Result<Vec<f64>> {
    grid.validate()?;
    Ok((0..grid.samples as u64).map(|i| sample_time(grid, i)).collect())
}

/// Phase classes for the frequency-phase ensemble. Frequencies are
/// `ω_k = E_P − E_Q ≥ 0`, so the pairing of `ω` with `−ω` is fixed by the
/// orientation and needs no separate conjugate class.
#[derive(Clone, Debug)]
pub struct PhaseClasses {
    /// Class index per block; `None` for zero frequency.
    class_of_block: Vec<Option<usize>>,
    pub frequencies: Vec<f64>,
}

impl PhaseClasses {
    pub fn new(modes: &SpecModes) -> Self {
        let mut frequencies: Vec<f64> = Vec::new();
        let mut class_of_block = Vec::with_capacity(modes.blocks.len());
        for b in &modes.blocks {
            let w = b.energies[1] - b.energies[0];
            if w < FREQUENCY_TOL {
                class_of_block.push(None);
                continue;
            }
            let c = match frequencies.iter().position(|f| (f - w).abs() < FREQUENCY_TOL) {
                Some(c) => c,
                None => {
                    frequencies.push(w);
                    frequencies.len() - 1
                }
            };
            class_of_block.push(Some(c));
        }
        Self { class_of_block, frequencies }
    }

    /// Mode phases (in [`SpecModes`] column order) given one phase per class.
    pub fn mode_phases(&self, class_phases: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(2 * self.class_of_block.len());
        for c in &self.class_of_block {
            out.push(0.0);
            out.push(c.map_or(0.0, |c| class_phases[c]));
        }
        out
    }

    /// Mode phases of realization `i`.
    pub fn sample(&self, seed: u64, i: u64) -> Vec<f64> {
        let mut rng = stream(seed, Domain::PhaseEnsemble, i);
        let phases: Vec<f64> = self.frequencies.iter().map(|_| 2.0 * PI * rng.random::<f64>()).collect();
        self.mode_phases(&phases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_oracle::{build_density_wave, fock_covariance, FockPropagator};
    use crate::gaussian_state::hs_distance;
    use crate::linalg::eigvalsh;
    use approx::assert_abs_diff_eq;

    #[test]
    fn minimal_model_spectrum() {
        let h = build_single_particle(&HamiltonianSpec::minimal(4).unwrap()).unwrap();
        let ev = eigvalsh(&h).unwrap();
        for (a, b) in ev.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
        assert_eq!(h.get(0, 3), C64::new(1.0, 0.0));
        let empty = build_single_particle(&HamiltonianSpec::new(6, vec![]).unwrap()).unwrap();
        assert_eq!(empty.frobenius_norm(), 0.0);
    }

    #[test]
    fn spec_validation() {
        assert!(HamiltonianSpec::minimal(5).is_err());
        assert!(HamiltonianSpec::new(6, vec![Hopping::uniform(0, 1.0)]).is_err());
        assert!(HamiltonianSpec::new(6, vec![Hopping::uniform(6, 1.0)]).is_err());
        assert!(HamiltonianSpec::new(4, vec![Hopping::uniform(3, 1.0)]).is_ok());
        assert!(HamiltonianSpec::new(4, vec![Hopping::uniform(1, f64::NAN)]).is_err());
    }

    #[test]
    fn even_range_entries() {
        let h = build_single_particle(&HamiltonianSpec::even_range(8, 0.3).unwrap()).unwrap();
        assert_abs_diff_eq!(h.get(0, 2).re, 0.3);
        assert_abs_diff_eq!(h.get(1, 3).re, -0.3);
        assert_abs_diff_eq!(h.get(2, 0).re, 0.3);
    }

    #[test]
    fn evolution_trivial_cases() {
        let c0 = density_wave_covariance(6).unwrap();
        let h = build_single_particle(&HamiltonianSpec::minimal(6).unwrap()).unwrap();
        assert!(hs_distance(&evolve_covariance(&h, &c0, 0.0).unwrap(), &c0).unwrap() < 1e-12);
        let zero = HermitianMatrix::zeros(6);
        assert!(hs_distance(&evolve_covariance(&zero, &c0, 5.0).unwrap(), &c0).unwrap() < 1e-12);
        assert!(evolve_covariance(&HermitianMatrix::zeros(4), &c0, 1.0).is_err());
    }

    #[test]
    fn evolution_matches_fock_oracle() {
        for (spec, t) in [
            (HamiltonianSpec::minimal(4).unwrap(), 1.0),
            (HamiltonianSpec::minimal(6).unwrap(), 2.3),
            (HamiltonianSpec::even_range(6, 0.3).unwrap(), 0.9),
            (HamiltonianSpec::new(6, vec![Hopping { range: 1, even: Amplitude::Complex([1.0, 0.4]), odd: 0.7.into() }]).unwrap(), 1.9),
        ] {
            let h = build_single_particle(&spec).unwrap();
            let c = evolve_covariance(&h, &density_wave_covariance(spec.n).unwrap(), t).unwrap();
            let psi = FockPropagator::new(&h).unwrap().evolve(&build_density_wave(spec.n).unwrap(), t).unwrap();
            let f = fock_covariance(&psi).unwrap();
            assert!(hs_distance(&c, &f).unwrap() < 1e-9, "N = {}, t = {t}", spec.n);
        }
    }

    #[test]
    fn evolution_preserves_spectrum() {
        let spec = HamiltonianSpec::even_range(20, 0.3).unwrap();
        let h = build_single_particle(&spec).unwrap();
        let c0 = density_wave_covariance(20).unwrap();
        for t in [0.5, 17.0, 3000.0] {
            let c = evolve_covariance(&h, &c0, t).unwrap();
            let ev = eigvalsh(c.matrix()).unwrap();
            for (i, v) in ev.iter().enumerate() {
                assert_abs_diff_eq!(*v, if i < 10 { 0.0 } else { 1.0 }, epsilon = 1e-10);
            }
            assert_abs_diff_eq!(c.particle_number(), 10.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn momentum_correlator_phase_convention() {
        let n = 16;
        let h = build_single_particle(&HamiltonianSpec::minimal(n).unwrap()).unwrap();
        let t = 1.37;
        let c = evolve_covariance(&h, &density_wave_covariance(n).unwrap(), t).unwrap();
        let g = momentum_correlator(&c);
        let e = |i: usize| 2.0 * (2.0 * PI * i as f64 / n as f64).cos();
        for a in 0..n {
            for b in 0..n {
                let want = if a == b {
                    C64::new(0.5, 0.0)
                } else if b == (a + n / 2) % n {
                    C64::from_polar(0.5, t * (e(a) - e(b)))
                } else {
                    C64::new(0.0, 0.0)
                };
                assert!((g[(a, b)] - want).norm() < 1e-9, "G[{a},{b}] = {} want {want}", g[(a, b)]);
            }
        }
    }

    #[test]
    fn occupations_of_the_three_models() {
        let p = conserved_occupations(&HamiltonianSpec::minimal(200).unwrap()).unwrap();
        assert!(p.theorem2_satisfied);
        assert_eq!(p.occupations.len(), 200);
        assert!(p.degenerate.iter().filter(|&&d| d).count() == 2);

        let p = conserved_occupations(&HamiltonianSpec::odd_range(200, 0.4).unwrap()).unwrap();
        assert!(p.theorem2_satisfied);
        assert!(p.max_deviation() < 1e-9);

        let p = conserved_occupations(&HamiltonianSpec::even_range(200, 0.3).unwrap()).unwrap();
        assert!(!p.theorem2_satisfied);
        assert!(p.max_deviation() > 0.05);
        for i in 0..100 {
            assert_abs_diff_eq!(p.occupations[i] + p.occupations[i + 100], 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(p.eta[i], p.eta[i + 100], epsilon = 1e-9);
        }
    }

    #[test]
    fn occupations_are_conserved() {
        // n = vᵀ C(t) conj(v) stays fixed for every non-degenerate block mode.
        let spec = HamiltonianSpec::even_range(12, 0.3).unwrap();
        let modes = spec_modes(&spec).unwrap();
        let p = conserved_occupations(&spec).unwrap();
        let evo = QuenchEvolution::for_spec(&spec).unwrap();
        let c = evo.at(41.3).unwrap();
        let cm = c.matrix().as_mat();
        for (i, b) in modes.blocks.iter().enumerate() {
            if b.degenerate {
                continue;
            }
            for a in 0..2 {
                let col = 2 * i + a;
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..12 {
                    for l in 0..12 {
                        acc += modes.basis.vectors[(j, col)] * cm[(j, l)] * modes.basis.vectors[(l, col)].conj();
                    }
                }
                let want = p.occupations[i + a * 6];
                assert_abs_diff_eq!(acc.re, want, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn profile_validation() {
        let p = OccupationProfile::from_lower(4, &[0.5, 0.5]).unwrap();
        assert!(p.theorem2_satisfied);
        assert!(OccupationProfile::from_lower(4, &[0.5]).is_err());
        assert!(OccupationProfile::from_lower(4, &[1.5, 0.5]).is_err());
        let mut bad = p.clone();
        bad.occupations[0] = 0.2;
        assert!(bad.check().is_err());
    }

    #[test]
    fn block_basis_and_phase_ensemble_reproduce_time_evolution() {
        let spec = HamiltonianSpec::odd_range(16, 0.4).unwrap();
        let h = build_single_particle(&spec).unwrap();
        let c0 = density_wave_covariance(16).unwrap();
        let modes = spec_modes(&spec).unwrap();
        let classes = PhaseClasses::new(&modes);
        let evo = QuenchEvolution::new(modes.basis.clone(), &c0).unwrap();
        for t in [0.7, 123.4] {
            let direct = evolve_covariance(&h, &c0, t).unwrap();
            assert!(hs_distance(&evo.at(t).unwrap(), &direct).unwrap() < 1e-9);
            let class_phases: Vec<f64> = classes.frequencies.iter().map(|w| w * t).collect();
            let via = evo.covariance(&classes.mode_phases(&class_phases)).unwrap();
            assert!(hs_distance(&via, &direct).unwrap() < 1e-9);
        }
    }

    #[test]
    fn time_sampling() {
        let g = TimeGrid::uniform(10.0 - 1e-6, 10.0, 1, 3).unwrap();
        let t = sample_times(&g).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0] - 10.0).abs() <= 1e-6);
        let g = TimeGrid::default_with_seed(7);
        assert_eq!(sample_times(&g).unwrap(), sample_times(&g).unwrap());
        assert_eq!(g.samples, 4096);
        assert!(TimeGrid::uniform(5.0, 5.0, 1, 0).is_err());
        assert!(TimeGrid::uniform(-1.0, 5.0, 1, 0).is_err());
        assert!(TimeGrid::uniform(0.0, 5.0, 0, 0).is_err());
    }
}
