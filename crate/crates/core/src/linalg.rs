//! Dense complex linear algebra: Hermitian and unitary matrix newtypes,
//! Hermitian eigendecomposition, unitary conjugation and Haar sampling.

use faer::{Mat, MatRef, Side};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{validation, Error, Result};

pub type C64 = Complex64;

/// Absolute tolerance on `|M_ij − conj(M_ji)|` for accepted Hermitian input.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Frobenius tolerance on `U†U − I` for accepted unitary input.
pub const UNITARY_TOL: f64 = 1e-10;

/// Dense Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    mat: Mat<C64>,
}

impl HermitianMatrix {
    /// Validates `mat` and stores its Hermitian part.
    pub fn new(mat: Mat<C64>) -> Result<Self> {
        let dim = mat.nrows();
        if dim == 0 {
            return validation("Hermitian matrix must have dim >= 1");
        }
        if mat.ncols() != dim {
            return validation(format!("matrix is {}x{}, not square", dim, mat.ncols()));
        }
        let dev = hermitian_deviation(mat.as_ref());
        if !(dev <= HERMITIAN_TOL) {
            return validation(format!("matrix is not Hermitian: max |M_ij - conj(M_ji)| = {dev:e}"));
        }
        Ok(Self::symmetrized(mat))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::new(Mat::from_fn(dim, dim, f))
    }

    /// Row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return validation(format!("expected {} entries, got {}", dim * dim, entries.len()));
        }
        Self::from_fn(dim, |i, j| entries[i * dim + j])
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::from_fn(diag.len(), |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: Mat::identity(dim, dim) }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { mat: Mat::zeros(dim, dim) }
    }

    /// Replaces `mat` by `(mat + mat†)/2`. Used for results of exact
    /// Hermitian-preserving arithmetic to absorb roundoff.
    pub(crate) fn symmetrized(mut mat: Mat<C64>) -> Self {
        let n = mat.nrows();
        for i in 0..n {
            mat[(i, i)] = C64::new(mat[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (mat[(i, j)] + mat[(j, i)].conj()) * 0.5;
                mat[(i, j)] = avg;
                mat[(j, i)] = avg.conj();
            }
        }
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn into_mat(self) -> Mat<C64> {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        let n = self.dim();
        (0..n * n).map(|k| self.mat[(k / n, k % n)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm_l2()
    }

    /// Principal submatrix on `indices` (assumed valid).
    pub(crate) fn principal(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        Self { mat: Mat::from_fn(k, k, |a, b| self.mat[(indices[a], indices[b])]) }
    }

    /// Leading `k×k` block.
    pub(crate) fn leading(&self, k: usize) -> Self {
        Self { mat: self.mat.as_ref().submatrix(0, 0, k, k).to_owned() }
    }
}

/// Largest `|M_ij − conj(M_ji)|`.
pub fn hermitian_deviation(m: MatRef<'_, C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Dense unitary matrix.
#[derive(Clone, Debug)]
pub struct UnitaryMatrix {
    mat: Mat<C64>,
}

impl UnitaryMatrix {
    pub fn new(mat: Mat<C64>) -> Result<Self> {
        let dim = mat.nrows();
        if dim == 0 || mat.ncols() != dim {
            return validation("unitary matrix must be square with dim >= 1");
        }
        let dev = unitarity_deviation(mat.as_ref());
        if !(dev <= UNITARY_TOL) {
            return validation(format!("matrix is not unitary: ||U'U - I||_F = {dev:e}"));
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: Mat::identity(dim, dim) }
    }

    pub(crate) fn from_mat_unchecked(mat: Mat<C64>) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn as_mat(&self) -> MatRef<'_, C64> {
        self.mat.as_ref()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn deviation(&self) -> f64 {
        unitarity_deviation(self.mat.as_ref())
    }
}

/// `‖U†U − I‖_F`.
pub fn unitarity_deviation(u: MatRef<'_, C64>) -> f64 {
    let g = u.adjoint() * u;
    let id = Mat::<C64>::identity(g.nrows(), g.ncols());
    (g - id).norm_l2()
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// as columns.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: UnitaryMatrix,
}

/// Full eigendecomposition `M = V diag(λ) V†`.
pub fn eigh(m: &HermitianMatrix) -> Result<Eigh> {
    let evd =
        m.as_mat().self_adjoint_eigen(Side::Lower).map_err(|e| Error::Numerical(format!("Hermitian eigendecomposition failed: {e:?}")))?;
    let values = (0..m.dim()).map(|i| evd.S()[i].re).collect();
    Ok(Eigh { values, vectors: UnitaryMatrix::from_mat_unchecked(evd.U().to_owned()) })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &HermitianMatrix) -> Result<Vec<f64>> {
    eigvalsh_ref(m.as_mat())
}

pub(crate) fn eigvalsh_ref(m: MatRef<'_, C64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Numerical(format!("Hermitian eigenvalue solve failed: {e:?}")))
}

/// `U M U†`.
pub fn conjugate(u: &UnitaryMatrix, m: &HermitianMatrix) -> Result<HermitianMatrix> {
    if u.dim() != m.dim() {
        return validation(format!("dimension mismatch: U is {}, M is {}", u.dim(), m.dim()));
    }
    let um = u.as_mat() * m.as_mat();
    Ok(HermitianMatrix::symmetrized(um * u.as_mat().adjoint()))
}

pub(crate) fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Orthonormal columns distributed as the first `cols` columns of a Haar
/// unitary of size `rows`: QR of a complex Ginibre matrix, then column `j`
/// of `Q` is multiplied by the phase of `R_jj`, which makes `R` have a
/// positive diagonal and the factorization unique.
pub fn sample_haar_columns<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<Mat<C64>> {
    if rows == 0 || cols == 0 || cols > rows {
        return validation(format!("invalid Haar column block {rows}x{cols}"));
    }
    let z = Mat::from_fn(rows, cols, |_, _| complex_normal(rng));
    let qr = z.qr();
    let r = qr.thin_R();
    let mut q = qr.compute_thin_Q();
    for j in 0..cols {
        let d = r[(j, j)];
        let norm = d.norm();
        let phase = if norm > 0.0 { d / norm } else { C64::new(1.0, 0.0) };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Haar-distributed unitary of size `dim`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<UnitaryMatrix> {
    if dim == 0 {
        return validation("Haar unitary dimension must be >= 1");
    }
    Ok(UnitaryMatrix::from_mat_unchecked(sample_haar_columns(dim, dim, rng)?))
}
