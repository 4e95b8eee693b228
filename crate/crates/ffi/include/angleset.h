#ifndef ANGLESET_H
#define ANGLESET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AnglesetStatus {
  ANGLESET_STATUS_OK = 0,
  ANGLESET_STATUS_VERIFICATION_FAILED = 1,
  ANGLESET_STATUS_INVALID_INPUT = 2,
  ANGLESET_STATUS_BUDGET_EXCEEDED = 3,
  ANGLESET_STATUS_NULL_POINTER = 4,
  ANGLESET_STATUS_INTERNAL = 5,
} AnglesetStatus;

/**
 * Opaque point set.
 */
typedef struct AnglesetPoints AnglesetPoints;

/**
 * Summary of an angle certificate. Triples are `(i, apex, k)`.
 */
typedef struct AnglesetCertificate {
  size_t n;
  double alpha_threshold;
  double max_angle;
  size_t argmax_triple[3];
  uint64_t borderline_count;
  uint64_t undecided_count;
  uint64_t violation_count;
  bool pass;
} AnglesetCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * call on the same thread; empty when nothing has failed.
 */
const char *angleset_last_error(void);

/**
 * Greedy construction in dimension `d` with slack `c` (a decimal string).
 * `k = 0` chooses the edge size automatically; `budget = 0` uses the
 * default candidate budget.
 *
 * # Safety
 * `c` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AnglesetStatus angleset_construct(size_t d,
                                       const char *c,
                                       size_t k,
                                       uint64_t budget,
                                       struct AnglesetPoints **out);

/**
 * Regular simplex with unit edges: `d + 1` points in `R^(d+1)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AnglesetStatus angleset_regular_simplex(size_t d, struct AnglesetPoints **out);

/**
 * Point set from `n * d` row-major doubles. Values are taken exactly.
 *
 * # Safety
 * `coords` must point to `n * d` readable doubles and `out` must be valid.
 */
enum AnglesetStatus angleset_points_from_coords(const double *coords,
                                                size_t n,
                                                size_t d,
                                                struct AnglesetPoints **out);

/**
 * Reads an `angleset-v1` point-set file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AnglesetStatus angleset_load(const char *path, struct AnglesetPoints **out);

/**
 * Writes the set as an `angleset-v1` file, atomically.
 *
 * # Safety
 * `points` must be a live handle and `path` a NUL-terminated string.
 */
enum AnglesetStatus angleset_save(const struct AnglesetPoints *points, const char *path);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `points` must be null or a live handle.
 */
size_t angleset_points_len(const struct AnglesetPoints *points);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `points` must be null or a live handle.
 */
size_t angleset_points_dim(const struct AnglesetPoints *points);

/**
 * Copies coordinates, rounded to double, row-major into `buf`, which must
 * hold at least `len * dim` values.
 *
 * # Safety
 * `points` must be a live handle and `buf` must have `buf_len` writable doubles.
 */
enum AnglesetStatus angleset_points_coords(const struct AnglesetPoints *points,
                                           double *buf,
                                           size_t buf_len);

/**
 * Certifies every angle against `alpha` (`pi/3+0.1`, `70deg`, `1.2rad`, ...).
 * Returns `Ok` on pass and `VerificationFailed` on failure; `out` is filled
 * in both cases.
 *
 * # Safety
 * `points` must be a live handle, `alpha` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum AnglesetStatus angleset_verify(const struct AnglesetPoints *points,
                                    const char *alpha,
                                    bool strict,
                                    struct AnglesetCertificate *out);

/**
 * Bound report for `(d, k, c)` as a JSON string; `k = 0` picks `k`
 * automatically. Release the string with [`angleset_string_free`].
 *
 * # Safety
 * `c` must be a NUL-terminated string and `out_json` a valid pointer.
 */
enum AnglesetStatus angleset_bound_report_json(size_t d, const char *c, size_t k, char **out_json);

/**
 * Jung's circumradius bound for a diameter-1 set in `R^d`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AnglesetStatus angleset_jung_radius(size_t d, double *out);

/**
 * # Safety
 * `points` must be null or a handle not yet freed.
 */
void angleset_points_free(struct AnglesetPoints *points);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void angleset_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANGLESET_H */
