#ifndef ENRIQUES_PHI_H
#define ENRIQUES_PHI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by all entry points.
 */
typedef enum EpStatus {
  EP_STATUS_OK = 0,
  EP_STATUS_NULL_POINTER = 1,
  EP_STATUS_INVALID_ARGUMENT = 2,
  EP_STATUS_OVERFLOW = 3,
  EP_STATUS_SINGULAR = 4,
  EP_STATUS_CONVERGENCE = 5,
  EP_STATUS_BUDGET = 6,
  EP_STATUS_LATTICE = 7,
  EP_STATUS_DISCRIMINANT = 8,
  EP_STATUS_NO_MATCH = 9,
  EP_STATUS_SERIALIZATION = 10,
  /**
   * A verification check ran and did not pass.
   */
  EP_STATUS_CHECK_FAILED = 11,
  EP_STATUS_PANIC = 12,
} EpStatus;

/**
 * Opaque truncated q-series.
 */
typedef struct EpSeries EpSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ep_version(void);

/**
 * Message of the last failure on this thread, or null. Valid until the next failing call.
 */
const char *ep_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ep_string_free(char *s);

/**
 * Boundary form of `Φ_level` truncated below `q^order`.
 *
 * # Safety
 * `out` must be a valid pointer; the handle is released with [`ep_series_free`].
 */
enum EpStatus ep_phi_boundary(uint8_t level, int64_t order, struct EpSeries **out);

/**
 * Number of nonzero terms.
 *
 * # Safety
 * `s` must be a live handle and `len` a valid pointer.
 */
enum EpStatus ep_series_len(const struct EpSeries *s, size_t *len);

/**
 * Exponent numerator, denominator and rational-integer coefficient of term `index`.
 *
 * # Safety
 * `s` must be a live handle; the out-pointers must be valid.
 */
enum EpStatus ep_series_term(const struct EpSeries *s,
                             size_t index,
                             int64_t *exponent,
                             int64_t *den,
                             int64_t *coeff);

/**
 * Releases a series handle; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void ep_series_free(struct EpSeries *s);

/**
 * Exact resultant of three symmetric 3×3 forms given as 27 numerators and
 * 27 positive denominators in row-major order, form by form. The result is
 * written as a `"p/q"` (or `"p"`) string.
 *
 * # Safety
 * `num` and `den` must point to 27 values each; `out` must be valid.
 */
enum EpStatus ep_resultant(const int64_t *num, const int64_t *den, char **out);

/**
 * Relative residual of the norm identity at `(τ1, τ2)` for a partition such as `"126/345"`.
 *
 * # Safety
 * `partition` must be a NUL-terminated string and `residual` a valid pointer.
 */
enum EpStatus ep_norm_identity_residual(double tau1_re,
                                        double tau1_im,
                                        double tau2_re,
                                        double tau2_im,
                                        const char *partition,
                                        double *residual);

/**
 * Runs one verification check with default tolerances and writes its JSON
 * report to `report` (may be null). Returns `EP_STATUS_CHECK_FAILED` when the
 * check ran and did not pass.
 *
 * # Safety
 * `id` must be a NUL-terminated string; `report`, if not null, must be valid.
 */
enum EpStatus ep_verify(const char *id, uint64_t seed, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENRIQUES_PHI_H */
