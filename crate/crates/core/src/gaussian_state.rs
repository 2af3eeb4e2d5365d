//! Fermionic Gaussian states in covariance form `C_jk = ⟨a_j† a_k⟩`.

use faer::Mat;

use crate::error::{validation, Error, Result};
use crate::linalg::{eigvalsh, HermitianMatrix, C64};

/// Accepted spectral excursion outside `[0, 1]` for a stored covariance.
pub const SPECTRUM_TOL: f64 = 1e-10;
/// Eigenvalues within this distance of `[0, 1]` are clamped before the
/// entropy is evaluated; anything further out is an error.
pub const CLAMP_WINDOW: f64 = 1e-8;
/// Frobenius tolerance on `C² − C` for a pure state.
pub const PURITY_TOL: f64 = 1e-9;

/// Covariance matrix of a number-conserving fermionic Gaussian state.
#[derive(Clone, Debug)]
pub struct CovarianceMatrix {
    c: HermitianMatrix,
}

impl CovarianceMatrix {
    /// Validates that `c` has its spectrum in `[0, 1]` up to [`SPECTRUM_TOL`].
    pub fn new(c: HermitianMatrix) -> Result<Self> {
        let ev = eigvalsh(&c)?;
        let (lo, hi) = (ev[0], ev[ev.len() - 1]);
        if lo < -SPECTRUM_TOL || hi > 1.0 + SPECTRUM_TOL {
            return validation(format!("covariance spectrum [{lo:e}, {hi}] is outside [0, 1]"));
        }
        Ok(Self { c })
    }

    /// Caller guarantees the spectrum condition (e.g. a unitary conjugate of
    /// a valid covariance, or a principal block of one).
    pub(crate) fn new_unchecked(c: HermitianMatrix) -> Self {
        Self { c }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(diag)?)
    }

    /// `I/2` on `dim` modes.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return validation("dimension must be >= 1");
        }
        Ok(Self::new_unchecked(HermitianMatrix::from_real_diagonal(&vec![0.5; dim])?))
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.c
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.c
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.c.get(i, j)
    }

    /// Expected particle number `Tr C`.
    pub fn particle_number(&self) -> f64 {
        self.c.trace()
    }

    /// `‖C² − C‖_F`; zero for a pure Gaussian state.
    pub fn purity_deviation(&self) -> f64 {
        let m = self.c.as_mat();
        (m * m - m).norm_l2()
    }

    pub fn is_pure(&self) -> bool {
        self.purity_deviation() < PURITY_TOL
    }
}

/// Ordered set of mode indices defining subsystem A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemSelection {
    indices: Vec<usize>,
}

impl SubsystemSelection {
    /// `indices` must be strictly increasing and non-empty.
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return validation("subsystem must contain at least one mode");
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return validation("subsystem indices must be strictly increasing");
        }
        Ok(Self { indices })
    }

    /// Modes `0..n_a`.
    pub fn prefix(n_a: usize) -> Result<Self> {
        Self::new((0..n_a).collect())
    }

    /// Modes `start..start+len`.
    pub fn contiguous(start: usize, len: usize) -> Result<Self> {
        Self::new((start..start + len).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Fails unless every index is below `n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        match self.indices.last() {
            Some(&last) if last >= n => validation(format!("subsystem index {last} out of range for {n} modes")),
            _ => Ok(()),
        }
    }

    /// True when the selection is `0..len`.
    pub fn is_prefix(&self) -> bool {
        self.indices.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Restriction `C_A` of `c` to the modes in `a`.
pub fn reduce(c: &CovarianceMatrix, a: &SubsystemSelection) -> Result<CovarianceMatrix> {
    a.check_within(c.dim())?;
    let block = if a.is_prefix() { c.c.leading(a.len()) } else { c.c.principal(a.indices()) };
    // Cauchy interlacing keeps the spectrum inside that of `c`.
    Ok(CovarianceMatrix::new_unchecked(block))
}

/// Binary entropy in bits, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Clamps a covariance eigenvalue into `[0, 1]` if it lies within
/// [`CLAMP_WINDOW`] of the interval.
pub fn clamp_eigenvalue(lambda: f64) -> Result<f64> {
    if !(-CLAMP_WINDOW..=1.0 + CLAMP_WINDOW).contains(&lambda) {
        return validation(format!("covariance eigenvalue {lambda} is outside [0, 1]"));
    }
    Ok(lambda.clamp(0.0, 1.0))
}

/// `Σ H(λ_i)` over covariance eigenvalues.
pub fn entropy_from_eigenvalues(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &v in values {
        s += binary_entropy(clamp_eigenvalue(v)?);
    }
    Ok(s)
}

/// Von Neumann entropy (bits) of the Gaussian state with covariance `c_a`.
pub fn entropy(c_a: &CovarianceMatrix) -> Result<f64> {
    entropy_from_eigenvalues(&eigvalsh(&c_a.c)?)
}

/// Hilbert–Schmidt distance `√Tr(C1 − C2)²`.
pub fn hs_distance(c1: &CovarianceMatrix, c2: &CovarianceMatrix) -> Result<f64> {
    if c1.dim() != c2.dim() {
        return validation(format!("dimension mismatch: {} vs {}", c1.dim(), c2.dim()));
    }
    Ok((c1.c.as_mat() - c2.c.as_mat()).norm_l2())
}

/// Distance to the maximally mixed state, `‖C − I/2‖_F`.
pub fn distance_to_mixed(c: &CovarianceMatrix) -> f64 {
    let n = c.dim();
    let half = Mat::from_fn(n, n, |i, j| if i == j { C64::new(0.5, 0.0) } else { C64::new(0.0, 0.0) });
    (c.c.as_mat() - half).norm_l2()
}

/// `X_A = 2 C_A − I`.
pub fn x_transform(c_a: &CovarianceMatrix) -> HermitianMatrix {
    let n = c_a.dim();
    let m = c_a.c.as_mat();
    HermitianMatrix::symmetrized(Mat::from_fn(n, n, |i, j| {
        let v = m[(i, j)] * 2.0;
        if i == j {
            v - C64::new(1.0, 0.0)
        } else {
            v
        }
    }))
}

/// Checks a computed covariance against its spectral contract, naming the
/// invariant on failure.
pub fn check_spectrum(name: &'static str, c: &CovarianceMatrix) -> Result<()> {
    let ev = eigvalsh(&c.c)?;
    let (lo, hi) = (ev[0], ev[ev.len() - 1]);
    if lo < -CLAMP_WINDOW || hi > 1.0 + CLAMP_WINDOW {
        return Err(Error::Invariant { name, detail: format!("spectrum [{lo:e}, {hi}] outside [0, 1]") });
    }
    Ok(())
}
