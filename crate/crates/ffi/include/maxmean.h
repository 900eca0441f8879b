#ifndef MAXMEAN_H
#define MAXMEAN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum MmStatus {
  MM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MM_STATUS_NULL_POINTER = 1,
  /**
   * Rejected input: bad window, exponent, length, or non-finite data.
   */
  MM_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The scales do not admit a counterexample (e.g. the larger one is a
   * multiple of the smaller).
   */
  MM_STATUS_NOT_A_COUNTEREXAMPLE = 3,
  /**
   * Internal error; the library panicked.
   */
  MM_STATUS_INTERNAL = 4,
} MmStatus;

/**
 * Opaque sample series.
 */
typedef struct MmSeries MmSeries;

/**
 * Opaque step function.
 */
typedef struct MmStepFunction MmStepFunction;

typedef struct MmWindowedNorm {
  double value;
  double value_pow_p;
  /**
   * First sample of the smallest maximizing window.
   */
  size_t arg_start;
} MmWindowedNorm;

/**
 * Outcome of an inequality check `lhs <= rhs` (or `<`).
 */
typedef struct MmCheck {
  double lhs;
  double rhs;
  double slack;
  /**
   * Scale factor on the right-hand side; NaN when not applicable.
   */
  double factor;
  bool passed;
} MmCheck;

typedef struct MmIntervalNorm {
  double value;
  double value_pow_p;
  /**
   * Left end of the smallest maximizing interval.
   */
  double arg_left;
} MmIntervalNorm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *mm_last_error(void);

/**
 * Copies `len` samples spaced `dt` apart into a new series.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum MmStatus mm_series_new(const double *values, size_t len, double dt, struct MmSeries **out);

/**
 * # Safety
 * `series` must come from this library and not be freed twice. Null is a no-op.
 */
void mm_series_free(struct MmSeries *series);

/**
 * Number of samples; 0 for null.
 *
 * # Safety
 * `series` must be null or a live handle.
 */
size_t mm_series_len(const struct MmSeries *series);

/**
 * Ones at indices `0, n, 2n, ...`, zeros elsewhere, `len` samples.
 *
 * # Safety
 * `out` must be writable.
 */
enum MmStatus mm_impulse_train(size_t n, size_t len, struct MmSeries **out);

/**
 * Maximal p-mean over windows of `n` samples.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum MmStatus mm_windowed_pnorm(const struct MmSeries *series,
                                double p,
                                size_t n,
                                struct MmWindowedNorm *out);

/**
 * Largest absolute sample.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum MmStatus mm_sup_norm(const struct MmSeries *series, double *out);

/**
 * `‖x‖^p` at window `m` against `(⌊m/n⌋+1)·n/m` times the value at `n`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum MmStatus mm_check_two_scale_bound(const struct MmSeries *series,
                                       double p,
                                       size_t n,
                                       size_t m,
                                       struct MmCheck *out);

/**
 * `‖x‖` at window `d·n` against the value at `n`.
 *
 * # Safety
 * `series` must be a live handle; `out` must be writable.
 */
enum MmStatus mm_check_multiple_ordering(const struct MmSeries *series,
                                         double p,
                                         size_t n,
                                         size_t d,
                                         struct MmCheck *out);

/**
 * Step function with `breakpoint_count` strictly increasing breakpoints and
 * `breakpoint_count - 1` piece values; zero outside.
 *
 * # Safety
 * `breakpoints` and `values` must point to that many readable doubles;
 * `out` must be writable.
 */
enum MmStatus mm_step_new(const double *breakpoints,
                          size_t breakpoint_count,
                          const double *values,
                          size_t value_count,
                          struct MmStepFunction **out);

/**
 * # Safety
 * `step` must come from this library and not be freed twice. Null is a no-op.
 */
void mm_step_free(struct MmStepFunction *step);

/**
 * Number of pieces after merging equal neighbours; 0 for null.
 *
 * # Safety
 * `step` must be null or a live handle.
 */
size_t mm_step_pieces(const struct MmStepFunction *step);

/**
 * Maximal p-mean over intervals of length `length`.
 *
 * # Safety
 * `step` must be a live handle; `out` must be writable.
 */
enum MmStatus mm_interval_pnorm(const struct MmStepFunction *step,
                                double p,
                                double length,
                                struct MmIntervalNorm *out);

/**
 * Rectangle of unit `L^p` mass on `(0, epsilon)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum MmStatus mm_single_bump(double epsilon, double p, struct MmStepFunction **out);

/**
 * `⌊S/T⌋ + 1` unit-mass bumps whose maximal mean at length `long` exceeds
 * the one at `short`. `out_d` (optional) receives `⌊S/T⌋`.
 *
 * # Safety
 * `out` must be writable; `out_d` must be null or writable.
 */
enum MmStatus mm_bump_train(double short_,
                            double long_,
                            double p,
                            struct MmStepFunction **out,
                            uint64_t *out_d);

/**
 * Continuous two-scale bound between lengths `short < long`.
 *
 * # Safety
 * `step` must be a live handle; `out` must be writable.
 */
enum MmStatus mm_check_two_scale_bound_cont(const struct MmStepFunction *step,
                                            double p,
                                            double short_,
                                            double long_,
                                            struct MmCheck *out);

/**
 * Static description of a status code.
 */
const char *mm_status_str(enum MmStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MAXMEAN_H */
