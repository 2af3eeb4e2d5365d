//! C ABI over the `ffpage` library.
//!
//! Every function returns an [`FfpStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and read with
//! [`ffp_last_error`]. Handles are opaque, created by `*_new`-style calls and
//! released with the matching `*_free`. Matrices cross the boundary as two
//! row-major `double` arrays, real and imaginary parts.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ffpage::gaussian_state::{entropy, hs_distance, reduce, SubsystemSelection};
use ffpage::linalg::HermitianMatrix;
use ffpage::page_curves::{dynamical_page_curve, moment_prediction, series_dyn};
use ffpage::quench::{
    build_single_particle, conserved_occupations, density_wave_covariance, evolve_covariance, HamiltonianSpec, Hopping, OccupationProfile,
    TimeGrid,
};
use ffpage::rfg::{rfg_page_curve, sample_covariance, series_rfg, BoundConstants, BoundKind, EnsembleConfig};
use ffpage::{CovarianceMatrix, Error, C64};

/// Result code of every exported function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvariantViolation = 3,
    Numerical = 4,
    SizeGuard = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Which concentration bound [`ffp_concentration_bound`] evaluates.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfpBound {
    CovarianceTypicality = 0,
    CovarianceAtypicality = 1,
    EntropyTypicality = 2,
    EntropyAtypicality = 3,
}

/// Covariance matrix of a fermionic Gaussian state.
pub struct FfpCovariance {
    inner: CovarianceMatrix,
}

/// Period-2 hopping Hamiltonian under construction. Validated on use.
pub struct FfpHamiltonian {
    n: usize,
    hoppings: Vec<Hopping>,
}

/// Conserved mode occupations of the density-wave quench.
pub struct FfpOccupations {
    inner: OccupationProfile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FfpStatus, msg: impl Into<String>) -> FfpStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> FfpStatus {
    let status = match &e {
        Error::Validation(_) => FfpStatus::InvalidArgument,
        Error::Invariant { .. } => FfpStatus::InvariantViolation,
        Error::Numerical(_) => FfpStatus::Numerical,
        Error::SizeGuard(_) => FfpStatus::SizeGuard,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics and library errors into status codes.
fn guard(f: impl FnOnce() -> Result<(), FfpStatus>) -> FfpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FfpStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(FfpStatus::Panic, format!("panic: {msg}"))
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, FfpStatus>;
}

impl<T> OrStatus<T> for ffpage::Result<T> {
    fn or_status(self) -> Result<T, FfpStatus> {
        self.map_err(from_error)
    }
}

fn non_null<T>(p: *const T, what: &str) -> Result<(), FfpStatus> {
    if p.is_null() {
        Err(fail(FfpStatus::NullPointer, format!("`{what}` is null")))
    } else {
        Ok(())
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], FfpStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], FfpStatus> {
    if len == 0 {
        return Ok(&mut []);
    }
    non_null(p, what)?;
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), FfpStatus> {
    non_null(out, what)?;
    out.write(value);
    Ok(())
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

unsafe fn reference<'a, T>(p: *const T, what: &str) -> Result<&'a T, FfpStatus> {
    non_null(p, what)?;
    Ok(&*p)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ffp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ffp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a covariance matrix from `dim × dim` row-major entries. `im` may be
/// null for a real matrix.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `dim * dim` doubles; `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_new(dim: usize, re: *const f64, im: *const f64, out: *mut *mut FfpCovariance) -> FfpStatus {
    guard(|| {
        let len = dim.checked_mul(dim).ok_or_else(|| fail(FfpStatus::InvalidArgument, "dimension overflows"))?;
        let re = slice(re, len, "re")?;
        let im = if im.is_null() { None } else { Some(slice(im, len, "im")?) };
        let entries: Vec<C64> = (0..len).map(|i| C64::new(re[i], im.map_or(0.0, |v| v[i]))).collect();
        let h = HermitianMatrix::from_row_major(dim, &entries).or_status()?;
        let c = CovarianceMatrix::new(h).or_status()?;
        write(out, boxed(FfpCovariance { inner: c }), "out")
    })
}

/// Density-wave state: odd sites (0-based) filled.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_density_wave(n: usize, out: *mut *mut FfpCovariance) -> FfpStatus {
    guard(|| {
        let c = density_wave_covariance(n).or_status()?;
        write(out, boxed(FfpCovariance { inner: c }), "out")
    })
}

/// Draws sample `index` of the random Gaussian ensemble with `m` of `n`
/// modes filled. The same `(seed, index)` always yields the same matrix.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_random(n: usize, m: usize, seed: u64, index: u64, out: *mut *mut FfpCovariance) -> FfpStatus {
    guard(|| {
        let cfg = EnsembleConfig::new(n, m, 1, seed).or_status()?;
        let c = sample_covariance(&cfg, index).or_status()?;
        write(out, boxed(FfpCovariance { inner: c }), "out")
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_free(c: *mut FfpCovariance) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_dim(c: *const FfpCovariance, out: *mut usize) -> FfpStatus {
    guard(|| write(out, reference(c, "c")?.inner.dim(), "out"))
}

/// Copies the entries row-major into `re` and `im`, each of length `len`
/// (at least `dim * dim`). Either output may be null to skip it.
///
/// # Safety
/// `c` must be a live handle; non-null outputs must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_entries(c: *const FfpCovariance, re: *mut f64, im: *mut f64, len: usize) -> FfpStatus {
    guard(|| {
        let c = &reference(c, "c")?.inner;
        let d = c.dim();
        if len < d * d {
            return Err(fail(FfpStatus::BufferTooSmall, format!("need {} entries, got {len}", d * d)));
        }
        let entries = c.matrix().to_row_major();
        if !re.is_null() {
            for (o, z) in slice_mut(re, d * d, "re")?.iter_mut().zip(&entries) {
                *o = z.re;
            }
        }
        if !im.is_null() {
            for (o, z) in slice_mut(im, d * d, "im")?.iter_mut().zip(&entries) {
                *o = z.im;
            }
        }
        Ok(())
    })
}

/// Restriction to the sites in `indices` (0-based, distinct).
///
/// # Safety
/// `c` must be a live handle; `indices` must hold `len` values; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_covariance_reduce(
    c: *const FfpCovariance,
    indices: *const usize,
    len: usize,
    out: *mut *mut FfpCovariance,
) -> FfpStatus {
    guard(|| {
        let c = &reference(c, "c")?.inner;
        let sel = SubsystemSelection::new(slice(indices, len, "indices")?.to_vec()).or_status()?;
        let r = reduce(c, &sel).or_status()?;
        write(out, boxed(FfpCovariance { inner: r }), "out")
    })
}

/// Von Neumann entropy in bits.
///
/// # Safety
/// `c` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_entropy(c: *const FfpCovariance, out: *mut f64) -> FfpStatus {
    guard(|| {
        let s = entropy(&reference(c, "c")?.inner).or_status()?;
        write(out, s, "out")
    })
}

/// Hilbert-Schmidt distance between two covariance matrices of equal size.
///
/// # Safety
/// `a` and `b` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_hs_distance(a: *const FfpCovariance, b: *const FfpCovariance, out: *mut f64) -> FfpStatus {
    guard(|| {
        let d = hs_distance(&reference(a, "a")?.inner, &reference(b, "b")?.inner).or_status()?;
        write(out, d, "out")
    })
}

/// Empty Hamiltonian on `n` sites with periodic boundaries.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_hamiltonian_new(n: usize, out: *mut *mut FfpHamiltonian) -> FfpStatus {
    guard(|| write(out, boxed(FfpHamiltonian { n, hoppings: Vec::new() }), "out"))
}

/// Adds `amp(j) a_j† a_{j+range} + h.c.` with `amp` equal to
/// `even_re + i even_im` on even `j` and `odd_re + i odd_im` on odd `j`.
///
/// # Safety
/// `h` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffp_hamiltonian_add_hopping(
    h: *mut FfpHamiltonian,
    range: usize,
    even_re: f64,
    even_im: f64,
    odd_re: f64,
    odd_im: f64,
) -> FfpStatus {
    guard(|| {
        non_null(h, "h")?;
        let h = &mut *h;
        let hop = Hopping { range, even: [even_re, even_im].into_amp(), odd: [odd_re, odd_im].into_amp() };
        let mut hoppings = h.hoppings.clone();
        hoppings.push(hop);
        HamiltonianSpec::new(h.n, hoppings.clone()).or_status()?;
        h.hoppings = hoppings;
        Ok(())
    })
}

trait IntoAmp {
    fn into_amp(self) -> ffpage::quench::Amplitude;
}

impl IntoAmp for [f64; 2] {
    fn into_amp(self) -> ffpage::quench::Amplitude {
        ffpage::quench::Amplitude::Complex(self)
    }
}

/// # Safety
/// `h` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffp_hamiltonian_free(h: *mut FfpHamiltonian) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

unsafe fn spec_of(h: *const FfpHamiltonian) -> Result<HamiltonianSpec, FfpStatus> {
    let h = reference(h, "h")?;
    HamiltonianSpec::new(h.n, h.hoppings.clone()).or_status()
}

/// Covariance at time `t` after evolving `c0` under `h`.
///
/// # Safety
/// `h` and `c0` must be live handles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_evolve(h: *const FfpHamiltonian, c0: *const FfpCovariance, t: f64, out: *mut *mut FfpCovariance) -> FfpStatus {
    guard(|| {
        let spec = spec_of(h)?;
        let hm = build_single_particle(&spec).or_status()?;
        let c = evolve_covariance(&hm, &reference(c0, "c0")?.inner, t).or_status()?;
        write(out, boxed(FfpCovariance { inner: c }), "out")
    })
}

/// Conserved occupations of the eigenmodes of `h` in the density-wave state.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_conserved_occupations(h: *const FfpHamiltonian, out: *mut *mut FfpOccupations) -> FfpStatus {
    guard(|| {
        let p = conserved_occupations(&spec_of(h)?).or_status()?;
        write(out, boxed(FfpOccupations { inner: p }), "out")
    })
}

/// Number of modes, equal to the chain length.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_occupations_len(p: *const FfpOccupations, out: *mut usize) -> FfpStatus {
    guard(|| write(out, reference(p, "p")?.inner.occupations.len(), "out"))
}

/// Copies momenta, occupations `n` and `√(n(1 − n))` into arrays of length
/// `len`.
/// Any output may be null.
///
/// # Safety
/// `p` must be a live handle; non-null outputs must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ffp_occupations_values(
    p: *const FfpOccupations,
    momenta: *mut f64,
    occupations: *mut f64,
    eta: *mut f64,
    len: usize,
) -> FfpStatus {
    guard(|| {
        let p = &reference(p, "p")?.inner;
        let n = p.occupations.len();
        if len < n {
            return Err(fail(FfpStatus::BufferTooSmall, format!("need {n} entries, got {len}")));
        }
        for (dst, src, name) in [(momenta, &p.momenta, "momenta"), (occupations, &p.occupations, "occupations"), (eta, &p.eta, "eta")] {
            if !dst.is_null() {
                slice_mut(dst, n, name)?.copy_from_slice(src);
            }
        }
        Ok(())
    })
}

/// Whether every non-degenerate occupation equals ½.
///
/// # Safety
/// `p` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_occupations_all_half(p: *const FfpOccupations, out: *mut bool) -> FfpStatus {
    guard(|| write(out, reference(p, "p")?.inner.theorem2_satisfied, "out"))
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ffp_occupations_free(p: *mut FfpOccupations) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Monte-Carlo Page curve of the random Gaussian ensemble: mean entropy and
/// its standard error at each of `len` subsystem sizes.
///
/// # Safety
/// `sizes` must hold `len` values; `mean` and `stderr` `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn ffp_rfg_page_curve(
    n: usize,
    m: usize,
    samples: usize,
    seed: u64,
    sizes: *const usize,
    len: usize,
    mean: *mut f64,
    stderr: *mut f64,
) -> FfpStatus {
    guard(|| {
        let sizes = slice(sizes, len, "sizes")?;
        let (mean, stderr) = (slice_mut(mean, len, "mean")?, slice_mut(stderr, len, "stderr")?);
        let cfg = EnsembleConfig::new(n, m, samples, seed).or_status()?;
        let r = rfg_page_curve(&cfg, sizes).or_status()?;
        for (i, p) in r.curve.points.iter().enumerate() {
            mean[i] = p.mean;
            stderr[i] = p.stderr;
        }
        Ok(())
    })
}

/// Long-time average of the entropy after the density-wave quench under
/// `h`, over `samples` uniform times in `[t_min, t_max]`.
///
/// # Safety
/// `h` must be a live handle; `sizes` must hold `len` values; `mean` and
/// `stderr` `len` doubles each.
#[no_mangle]
pub unsafe extern "C" fn ffp_dynamical_page_curve(
    h: *const FfpHamiltonian,
    t_min: f64,
    t_max: f64,
    samples: usize,
    seed: u64,
    sizes: *const usize,
    len: usize,
    mean: *mut f64,
    stderr: *mut f64,
) -> FfpStatus {
    guard(|| {
        let spec = spec_of(h)?;
        let sizes = slice(sizes, len, "sizes")?;
        let (mean, stderr) = (slice_mut(mean, len, "mean")?, slice_mut(stderr, len, "stderr")?);
        let grid = TimeGrid::uniform(t_min, t_max, samples, seed).or_status()?;
        let curve = dynamical_page_curve(&spec, &grid, sizes).or_status()?;
        for (i, p) in curve.points.iter().enumerate() {
            mean[i] = p.mean;
            stderr[i] = p.stderr;
        }
        Ok(())
    })
}

/// Fourth-order series for the ensemble-average entropy density at `f ≤ ½`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_series_rfg(f: f64, out: *mut f64) -> FfpStatus {
    guard(|| write(out, series_rfg(f).or_status()?, "out"))
}

/// Fourth-order series for the time-averaged entropy density at `f ≤ ½`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_series_dyn(f: f64, out: *mut f64) -> FfpStatus {
    guard(|| write(out, series_dyn(f).or_status()?, "out"))
}

/// Predicted time average of `Tr X^(2 order)` for `order` in 1..=3.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_moment_prediction(order: u32, n: usize, n_a: usize, out: *mut f64) -> FfpStatus {
    guard(|| write(out, moment_prediction(order, n, n_a).or_status()?, "out"))
}

/// Right-hand side of a concentration bound at half filling. Writes NaN
/// where `epsilon` lies outside the bound's domain.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ffp_concentration_bound(kind: FfpBound, n: usize, n_a: usize, epsilon: f64, out: *mut f64) -> FfpStatus {
    guard(|| {
        if n < 2 || n_a == 0 || n_a > n || !(epsilon > 0.0) {
            return Err(fail(FfpStatus::InvalidArgument, "need n >= 2, 1 <= n_a <= n and epsilon > 0"));
        }
        let kind = match kind {
            FfpBound::CovarianceTypicality => BoundKind::CovarianceTypicality,
            FfpBound::CovarianceAtypicality => BoundKind::CovarianceAtypicality,
            FfpBound::EntropyTypicality => BoundKind::EntropyTypicality,
            FfpBound::EntropyAtypicality => BoundKind::EntropyAtypicality,
        };
        write(out, BoundConstants::new(n, n_a).bound(kind, epsilon).unwrap_or(f64::NAN), "out")
    })
}
