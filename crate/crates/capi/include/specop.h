#ifndef SPECOP_H
#define SPECOP_H

/* Generated by cbindgen from specop-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum SpecopStatus {
  SpecopStatus_Ok = 0,
  SpecopStatus_InvalidArgument = 1,
  SpecopStatus_NoConvergence = 2,
  SpecopStatus_Degenerate = 3,
  SpecopStatus_NullPointer = 4,
  SpecopStatus_BufferTooSmall = 5,
  SpecopStatus_InternalPanic = 6,
} SpecopStatus;

/**
 * Opaque weight-sequence handle.
 */
typedef struct SpecopWeight SpecopWeight;

/**
 * One predicted point-spectrum entry. `branch` is 0 for the minus branch
 * (below the essential interval) and 1 for the plus branch (above).
 */
typedef struct SpecopPointEigen {
  uint32_t j;
  int32_t branch;
  double lambda;
  double rho;
  double pole;
  bool valid;
} SpecopPointEigen;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message for the most recent error on this thread into `buf`
 * (NUL-terminated, truncated to `cap`). Returns the full message length.
 *
 * # Safety
 * `buf` must point to `cap` writable bytes (or be null, in which case only
 * the length is reported).
 */
size_t specop_last_error_message(char *buf, size_t cap);

/**
 * Creates a binomial-family weight handle (`alpha < 1`).
 *
 * # Safety
 * `out` must be a valid pointer; the handle must be released with
 * [`specop_weight_free`].
 */
enum SpecopStatus specop_weight_bergman(double alpha, struct SpecopWeight **out);

/**
 * Creates a power-family weight handle (`w_n = (n+1)^alpha`).
 *
 * # Safety
 * As for [`specop_weight_bergman`].
 */
enum SpecopStatus specop_weight_dirichlet_pow(double alpha, struct SpecopWeight **out);

/**
 * Releases a weight handle. Null is a no-op.
 *
 * # Safety
 * `w` must have come from a `specop_weight_*` constructor and must not be
 * used afterwards.
 */
void specop_weight_free(struct SpecopWeight *w);

/**
 * Weight value `w_n`.
 *
 * # Safety
 * `w` must be a live handle, `out` a valid pointer.
 */
enum SpecopStatus specop_weight_value(const struct SpecopWeight *w, size_t n, double *out);

/**
 * Consecutive ratio `w_{n+1}/w_n`.
 *
 * # Safety
 * As for [`specop_weight_value`].
 */
enum SpecopStatus specop_weight_ratio(const struct SpecopWeight *w, size_t n, double *out);

/**
 * The essential interval `[(1-|a|)^2, (1+|a|)^2]` for `a = a_re + i a_im`.
 *
 * # Safety
 * `lo` and `hi` must be valid pointers.
 */
enum SpecopStatus specop_essential_interval(double a_re, double a_im, double *lo, double *hi);

/**
 * Closed-form candidate eigenvalues for the binomial weights: both
 * branches for `j <= jmax`, written in order. Requires
 * `cap >= 2 (jmax + 1)`; `written` receives the entry count (0 when the
 * point spectrum is empty).
 *
 * # Safety
 * `out` must point to `cap` entries, `written` must be valid.
 */
enum SpecopStatus specop_point_spectrum(double alpha,
                                        double a_re,
                                        double a_im,
                                        uint32_t jmax,
                                        struct SpecopPointEigen *out,
                                        size_t cap,
                                        size_t *written);

/**
 * All `n` eigenvalues of the dimension-`n` finite section for gauge
 * modulus `a_mod`, ascending.
 *
 * # Safety
 * `w` must be a live handle and `out` must point to `n` doubles.
 */
enum SpecopStatus specop_section_eigenvalues(const struct SpecopWeight *w,
                                             double a_mod,
                                             size_t n,
                                             double *out);

/**
 * Section eigenvalues outside the essential interval by more than
 * `margin`, split into the two sides.
 *
 * # Safety
 * `w` live; the two buffer/len pairs valid with the stated capacities.
 */
enum SpecopStatus specop_outliers(const struct SpecopWeight *w,
                                  double a_mod,
                                  size_t n,
                                  double margin,
                                  double *below,
                                  size_t below_cap,
                                  size_t *below_len,
                                  double *above,
                                  size_t above_cap,
                                  size_t *above_len);

/**
 * Inner-function test for a polynomial given as `n_coeffs` interleaved
 * `(re, im)` pairs, constant term first.
 *
 * # Safety
 * `w` live; `coeffs` points to `2 * n_coeffs` doubles; `out` valid.
 */
enum SpecopStatus specop_inner_check(const struct SpecopWeight *w,
                                     const double *coeffs,
                                     size_t n_coeffs,
                                     double tol,
                                     bool *out);

/**
 * The normalized formal solution of the eigenvalue recurrence at `lambda`,
 * written as `n_terms` interleaved `(re, im)` pairs.
 *
 * # Safety
 * `w` live; `out` points to `2 * n_terms` doubles.
 */
enum SpecopStatus specop_eigenfunction_recurrence(const struct SpecopWeight *w,
                                                  double a_mod,
                                                  double lambda,
                                                  size_t n_terms,
                                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPECOP_H */
