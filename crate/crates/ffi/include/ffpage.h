#ifndef FFPAGE_H
#define FFPAGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every exported function.
 */
typedef enum FfpStatus {
  FFP_STATUS_OK = 0,
  FFP_STATUS_NULL_POINTER = 1,
  FFP_STATUS_INVALID_ARGUMENT = 2,
  FFP_STATUS_INVARIANT_VIOLATION = 3,
  FFP_STATUS_NUMERICAL = 4,
  FFP_STATUS_SIZE_GUARD = 5,
  FFP_STATUS_BUFFER_TOO_SMALL = 6,
  FFP_STATUS_PANIC = 7,
} FfpStatus;

/**
 * Which concentration bound [`ffp_concentration_bound`] evaluates.
 */
typedef enum FfpBound {
  FFP_BOUND_COVARIANCE_TYPICALITY = 0,
  FFP_BOUND_COVARIANCE_ATYPICALITY = 1,
  FFP_BOUND_ENTROPY_TYPICALITY = 2,
  FFP_BOUND_ENTROPY_ATYPICALITY = 3,
} FfpBound;

/**
 * Covariance matrix of a fermionic Gaussian state.
 */
typedef struct FfpCovariance FfpCovariance;

/**
 * Period-2 hopping Hamiltonian under construction. Validated on use.
 */
typedef struct FfpHamiltonian FfpHamiltonian;

/**
 * Conserved mode occupations of the density-wave quench.
 */
typedef struct FfpOccupations FfpOccupations;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ffp_version(void);

/**
 * Message of the last failure on this thread, or null if none. Valid until
 * the next failing call on the same thread.
 */
const char *ffp_last_error(void);

/**
 * Builds a covariance matrix from `dim × dim` row-major entries. `im` may be
 * null for a real matrix.
 *
 * # Safety
 * `re` (and `im` if non-null) must point to `dim * dim` doubles; `out` must
 * be writable.
 */
enum FfpStatus ffp_covariance_new(size_t dim,
                                  const double *re,
                                  const double *im,
                                  struct FfpCovariance **out);

/**
 * Density-wave state: odd sites (0-based) filled.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_covariance_density_wave(size_t n, struct FfpCovariance **out);

/**
 * Draws sample `index` of the random Gaussian ensemble with `m` of `n`
 * modes filled. The same `(seed, index)` always yields the same matrix.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_covariance_random(size_t n,
                                     size_t m,
                                     uint64_t seed,
                                     uint64_t index,
                                     struct FfpCovariance **out);

/**
 * # Safety
 * `c` must be null or a handle not yet freed.
 */
void ffp_covariance_free(struct FfpCovariance *c);

/**
 * # Safety
 * `c` must be a live handle; `out` writable.
 */
enum FfpStatus ffp_covariance_dim(const struct FfpCovariance *c, size_t *out);

/**
 * Copies the entries row-major into `re` and `im`, each of length `len`
 * (at least `dim * dim`). Either output may be null to skip it.
 *
 * # Safety
 * `c` must be a live handle; non-null outputs must hold `len` doubles.
 */
enum FfpStatus ffp_covariance_entries(const struct FfpCovariance *c,
                                      double *re,
                                      double *im,
                                      size_t len);

/**
 * Restriction to the sites in `indices` (0-based, distinct).
 *
 * # Safety
 * `c` must be a live handle; `indices` must hold `len` values; `out` writable.
 */
enum FfpStatus ffp_covariance_reduce(const struct FfpCovariance *c,
                                     const size_t *indices,
                                     size_t len,
                                     struct FfpCovariance **out);

/**
 * Von Neumann entropy in bits.
 *
 * # Safety
 * `c` must be a live handle; `out` writable.
 */
enum FfpStatus ffp_entropy(const struct FfpCovariance *c, double *out);

/**
 * Hilbert-Schmidt distance between two covariance matrices of equal size.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` writable.
 */
enum FfpStatus ffp_hs_distance(const struct FfpCovariance *a,
                               const struct FfpCovariance *b,
                               double *out);

/**
 * Empty Hamiltonian on `n` sites with periodic boundaries.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_hamiltonian_new(size_t n, struct FfpHamiltonian **out);

/**
 * Adds `amp(j) a_j† a_{j+range} + h.c.` with `amp` equal to
 * `even_re + i even_im` on even `j` and `odd_re + i odd_im` on odd `j`.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum FfpStatus ffp_hamiltonian_add_hopping(struct FfpHamiltonian *h,
                                           size_t range,
                                           double even_re,
                                           double even_im,
                                           double odd_re,
                                           double odd_im);

/**
 * # Safety
 * `h` must be null or a handle not yet freed.
 */
void ffp_hamiltonian_free(struct FfpHamiltonian *h);

/**
 * Covariance at time `t` after evolving `c0` under `h`.
 *
 * # Safety
 * `h` and `c0` must be live handles; `out` writable.
 */
enum FfpStatus ffp_evolve(const struct FfpHamiltonian *h,
                          const struct FfpCovariance *c0,
                          double t,
                          struct FfpCovariance **out);

/**
 * Conserved occupations of the eigenmodes of `h` in the density-wave state.
 *
 * # Safety
 * `h` must be a live handle; `out` writable.
 */
enum FfpStatus ffp_conserved_occupations(const struct FfpHamiltonian *h,
                                         struct FfpOccupations **out);

/**
 * Number of modes, equal to the chain length.
 *
 * # Safety
 * `p` must be a live handle; `out` writable.
 */
enum FfpStatus ffp_occupations_len(const struct FfpOccupations *p, size_t *out);

/**
 * Copies momenta, occupations `n` and `√(n(1 − n))` into arrays of length
 * `len`.
 * Any output may be null.
 *
 * # Safety
 * `p` must be a live handle; non-null outputs must hold `len` doubles.
 */
enum FfpStatus ffp_occupations_values(const struct FfpOccupations *p,
                                      double *momenta,
                                      double *occupations,
                                      double *eta,
                                      size_t len);

/**
 * Whether every non-degenerate occupation equals ½.
 *
 * # Safety
 * `p` must be a live handle; `out` writable.
 */
enum FfpStatus ffp_occupations_all_half(const struct FfpOccupations *p, bool *out);

/**
 * # Safety
 * `p` must be null or a handle not yet freed.
 */
void ffp_occupations_free(struct FfpOccupations *p);

/**
 * Monte-Carlo Page curve of the random Gaussian ensemble: mean entropy and
 * its standard error at each of `len` subsystem sizes.
 *
 * # Safety
 * `sizes` must hold `len` values; `mean` and `stderr` `len` doubles each.
 */
enum FfpStatus ffp_rfg_page_curve(size_t n,
                                  size_t m,
                                  size_t samples,
                                  uint64_t seed,
                                  const size_t *sizes,
                                  size_t len,
                                  double *mean,
                                  double *stderr);

/**
 * Long-time average of the entropy after the density-wave quench under
 * `h`, over `samples` uniform times in `[t_min, t_max]`.
 *
 * # Safety
 * `h` must be a live handle; `sizes` must hold `len` values; `mean` and
 * `stderr` `len` doubles each.
 */
enum FfpStatus ffp_dynamical_page_curve(const struct FfpHamiltonian *h,
                                        double t_min,
                                        double t_max,
                                        size_t samples,
                                        uint64_t seed,
                                        const size_t *sizes,
                                        size_t len,
                                        double *mean,
                                        double *stderr);

/**
 * Fourth-order series for the ensemble-average entropy density at `f ≤ ½`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_series_rfg(double f, double *out);

/**
 * Fourth-order series for the time-averaged entropy density at `f ≤ ½`.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_series_dyn(double f, double *out);

/**
 * Predicted time average of `Tr X^(2 order)` for `order` in 1..=3.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_moment_prediction(uint32_t order, size_t n, size_t n_a, double *out);

/**
 * Right-hand side of a concentration bound at half filling. Writes NaN
 * where `epsilon` lies outside the bound's domain.
 *
 * # Safety
 * `out` must be writable.
 */
enum FfpStatus ffp_concentration_bound(enum FfpBound kind,
                                       size_t n,
                                       size_t n_a,
                                       double epsilon,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FFPAGE_H */
