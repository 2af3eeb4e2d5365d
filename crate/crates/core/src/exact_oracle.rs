//! Brute-force Fock-space simulation for small systems.
//!
//! Basis states are occupation bitstrings: bit `j` of the index is the
//! occupation of mode `j`. A basis state is `a†_{j1} a†_{j2} … |0⟩` with
//! `j1 < j2 < …`, so `a_j†` acting on it picks up
//! `(−1)^{#occupied modes below j}` (Jordan–Wigner ordering). When printed,
//! bitstrings list mode 0 first.

use faer::{Mat, Side};

use crate::error::{validation, Error, Result};
use crate::gaussian_state::{entropy, reduce, CovarianceMatrix, SubsystemSelection};
use crate::linalg::{HermitianMatrix, C64};
use crate::quench::{build_single_particle, density_wave_covariance, evolve_covariance, HamiltonianSpec};

/// Largest mode count the oracle accepts.
pub const MAX_MODES: usize = 12;
/// Norm tolerance for a valid state.
pub const NORM_TOL: f64 = 1e-10;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_MODES {
        return Err(Error::SizeGuard(format!("Fock oracle refuses N = {n} > {MAX_MODES}")));
    }
    if n == 0 {
        return validation("Fock state needs at least one mode");
    }
    Ok(())
}

/// Sign of moving past the occupied modes below `j`.
fn jw_sign(state: usize, j: usize) -> f64 {
    if (state & ((1usize << j) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `a_j† |state⟩` as `(sign, new_state)`, or `None` if mode `j` is occupied.
pub fn create(state: usize, j: usize) -> Option<(f64, usize)> {
    if state & (1 << j) != 0 {
        None
    } else {
        Some((jw_sign(state, j), state | (1 << j)))
    }
}

/// `a_j |state⟩` as `(sign, new_state)`, or `None` if mode `j` is empty.
pub fn annihilate(state: usize, j: usize) -> Option<(f64, usize)> {
    if state & (1 << j) == 0 {
        None
    } else {
        Some((jw_sign(state, j), state ^ (1 << j)))
    }
}

/// Normalized many-body state on `n ≤ 12` modes.
#[derive(Clone, Debug)]
pub struct FockState {
    n: usize,
    amps: Vec<C64>,
}

impl FockState {
    pub fn new(n: usize, amps: Vec<C64>) -> Result<Self> {
        guard(n)?;
        if amps.len() != 1 << n {
            return validation(format!("expected {} amplitudes, got {}", 1usize << n, amps.len()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return validation(format!("state norm {norm} differs from 1"));
        }
        Ok(Self { n, amps })
    }

    /// The single basis state `state`.
    pub fn basis(n: usize, state: usize) -> Result<Self> {
        guard(n)?;
        if state >= 1 << n {
            return validation(format!("basis index {state} out of range for {n} modes"));
        }
        let mut amps = vec![zero(); 1 << n];
        amps[state] = C64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨N⟩`.
    pub fn particle_number(&self) -> f64 {
        self.amps.iter().enumerate().map(|(s, a)| a.norm_sqr() * s.count_ones() as f64).sum()
    }

    /// `Σ coeff · (op)|ψ⟩` for `op = a_j† a_k`, returned as a raw vector.
    fn hop(&self, j: usize, k: usize) -> Vec<C64> {
        let mut out = vec![zero(); self.amps.len()];
        for (s, &a) in self.amps.iter().enumerate() {
            if a == zero() {
                continue;
            }
            if let Some((s1, t)) = annihilate(s, k) {
                if let Some((s2, u)) = create(t, j) {
                    out[u] += a * (s1 * s2);
                }
            }
        }
        out
    }

    fn inner(&self, v: &[C64]) -> C64 {
        self.amps.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Bitstring with modes `0, 2, 4, …` occupied.
pub fn density_wave_bits(n: usize) -> usize {
    (0..n).step_by(2).map(|j| 1usize << j).sum()
}

/// Period-2 density wave on `n` modes (even sites occupied).
pub fn build_density_wave(n: usize) -> Result<FockState> {
    if !n.is_multiple_of(2) {
        return validation(format!("density wave needs even N, got {n}"));
    }
    FockState::basis(n, density_wave_bits(n))
}

/// Renders a basis index with mode 0 first.
pub fn bitstring(n: usize, state: usize) -> String {
    (0..n).map(|j| if state & (1 << j) != 0 { '1' } else { '0' }).collect()
}

struct Sector {
    states: Vec<usize>,
    energies: Vec<f64>,
    vectors: Mat<C64>,
}

/// Exact propagator `e^{−iHt}` of `H = Σ h_jk a_j† a_k`, diagonalized once
/// per particle-number sector.
pub struct FockPropagator {
    n: usize,
    sectors: Vec<Sector>,
    position: Vec<usize>,
}

impl FockPropagator {
    pub fn new(h: &HermitianMatrix) -> Result<Self> {
        let n = h.dim();
        guard(n)?;
        let mut position = vec![0usize; 1 << n];
        let mut sectors = Vec::with_capacity(n + 1);
        for p in 0..=n {
            let states: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() as usize == p).collect();
            for (i, &s) in states.iter().enumerate() {
                position[s] = i;
            }
            let d = states.len();
            let mut hm = Mat::<C64>::zeros(d, d);
            for (col, &s) in states.iter().enumerate() {
                for k in 0..n {
                    let Some((s1, t)) = annihilate(s, k) else { continue };
                    for j in 0..n {
                        let hjk = h.get(j, k);
                        if hjk == zero() {
                            continue;
                        }
                        if let Some((s2, u)) = create(t, j) {
                            hm[(position[u], col)] += hjk * (s1 * s2);
                        }
                    }
                }
            }
            let evd = HermitianMatrix::symmetrized(hm)
                .as_mat()
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::Numerical(format!("sector {p} eigendecomposition failed: {e:?}")))?;
            let energies = (0..d).map(|i| evd.S()[i].re).collect();
            sectors.push(Sector { states, energies, vectors: evd.U().to_owned() });
        }
        Ok(Self { n, sectors, position })
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    /// `e^{−iHt} |ψ⟩`.
    pub fn evolve(&self, psi: &FockState, t: f64) -> Result<FockState> {
        if psi.n != self.n {
            return validation(format!("state has {} modes, propagator {}", psi.n, self.n));
        }
        let mut out = vec![zero(); psi.amps.len()];
        for sec in &self.sectors {
            let d = sec.states.len();
            let v = Mat::from_fn(d, 1, |i, _| psi.amps[sec.states[i]]);
            if v.norm_l2() == 0.0 {
                continue;
            }
            let mut w = sec.vectors.adjoint() * &v;
            for i in 0..d {
                w[(i, 0)] *= C64::from_polar(1.0, -sec.energies[i] * t);
            }
            let r = &sec.vectors * &w;
            for i in 0..d {
                out[sec.states[i]] = r[(i, 0)];
            }
        }
        debug_assert!(self.position.len() == out.len());
        let evolved = FockState { n: self.n, amps: out };
        let norm = evolved.norm();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Invariant { name: "fock-norm", detail: format!("norm {norm} after evolution") });
        }
        Ok(evolved)
    }
}

/// One-shot `e^{−iHt}|ψ⟩`.
pub fn evolve_fock(psi: &FockState, h: &HermitianMatrix, t: f64) -> Result<FockState> {
    FockPropagator::new(h)?.evolve(psi, t)
}

/// `C_jk = ⟨ψ| a_j† a_k |ψ⟩`.
pub fn fock_covariance(psi: &FockState) -> Result<CovarianceMatrix> {
    let n = psi.n;
    let mut m = Mat::<C64>::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            m[(j, k)] = psi.inner(&psi.hop(j, k));
        }
    }
    CovarianceMatrix::new(HermitianMatrix::symmetrized(m))
}

/// `⟨ψ| a_i† a_j† a_k a_l |ψ⟩`.
pub fn four_point(psi: &FockState, i: usize, j: usize, k: usize, l: usize) -> Result<C64> {
    let n = psi.n;
    if [i, j, k, l].iter().any(|&x| x >= n) {
        return validation("mode index out of range");
    }
    let mut out = vec![zero(); psi.amps.len()];
    for (s, &a) in psi.amps.iter().enumerate() {
        if a == zero() {
            continue;
        }
        let r = annihilate(s, l)
            .and_then(|(g1, s)| annihilate(s, k).map(|(g2, s)| (g1 * g2, s)))
            .and_then(|(g, s)| create(s, j).map(|(g3, s)| (g * g3, s)))
            .and_then(|(g, s)| create(s, i).map(|(g4, s)| (g * g4, s)));
        if let Some((g, u)) = r {
            out[u] += a * g;
        }
    }
    Ok(psi.inner(&out))
}

/// Von Neumann entropy (bits) of the reduced state on `a`.
///
/// Modes are reordered so `a` comes first; the sign of each basis state under
/// that reordering is the parity of (complement mode, subsystem mode) pairs
/// that are both occupied and out of order.
pub fn fock_entropy(psi: &FockState, a: &SubsystemSelection) -> Result<f64> {
    let n = psi.n;
    a.check_within(n)?;
    let in_a: Vec<usize> = a.indices().to_vec();
    let rest: Vec<usize> = (0..n).filter(|j| !in_a.contains(j)).collect();
    let (na, nb) = (in_a.len(), rest.len());
    if nb == 0 {
        // Pure global state.
        return Ok(0.0);
    }
    let mut m = Mat::<C64>::zeros(1 << na, 1 << nb);
    for (s, &amp) in psi.amps.iter().enumerate() {
        if amp == zero() {
            continue;
        }
        let mut ia = 0usize;
        let mut inversions = 0u32;
        for (pos, &j) in in_a.iter().enumerate() {
            if s & (1 << j) != 0 {
                ia |= 1 << pos;
                inversions += rest.iter().filter(|&&r| r < j && s & (1 << r) != 0).count() as u32;
            }
        }
        let ib = rest.iter().enumerate().filter(|(_, &r)| s & (1 << r) != 0).map(|(p, _)| 1usize << p).sum::<usize>();
        let sign = if inversions.is_multiple_of(2) { 1.0 } else { -1.0 };
        m[(ia, ib)] = amp * sign;
    }
    // The smaller of the two reduced density matrices has the same spectrum.
    let rho = if na <= nb { &m * m.adjoint() } else { m.adjoint() * &m };
    let probs = rho.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Numerical(format!("reduced density matrix: {e:?}")))?;
    Ok(probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum())
}

/// One Gaussian-versus-Fock entropy comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleComparison {
    pub t: f64,
    pub start: usize,
    pub n_a: usize,
    pub gaussian: f64,
    pub fock: f64,
}

impl OracleComparison {
    pub fn abs_diff(&self) -> f64 {
        (self.gaussian - self.fock).abs()
    }
}

/// Quenches the density wave with `spec` and compares the covariance
/// entropy with the Fock-space entropy at every time in `times`, for every
/// contiguous block `start..start+n_a` with `1 <= n_a < N`.
pub fn compare_with_gaussian(spec: &HamiltonianSpec, times: &[f64]) -> Result<Vec<OracleComparison>> {
    let n = spec.n;
    let h = build_single_particle(spec)?;
    let prop = FockPropagator::new(&h)?;
    let psi0 = build_density_wave(n)?;
    let c0 = density_wave_covariance(n)?;
    let mut out = Vec::new();
    for &t in times {
        let psi = prop.evolve(&psi0, t)?;
        let c = evolve_covariance(&h, &c0, t)?;
        for n_a in 1..n {
            for start in 0..=(n - n_a) {
                let a = SubsystemSelection::contiguous(start, n_a)?;
                out.push(OracleComparison { t, start, n_a, gaussian: entropy(&reduce(&c, &a)?)?, fock: fock_entropy(&psi, &a)? });
            }
        }
    }
    Ok(out)
}
