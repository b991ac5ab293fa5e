#ifndef ORBA_H
#define ORBA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OrbaStatus {
  ORBA_STATUS_OK = 0,
  ORBA_STATUS_NULL_POINTER = 1,
  ORBA_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON, wrong dimensions or an invalid descriptor.
   */
  ORBA_STATUS_INVALID_INPUT = 3,
  /**
   * A well-formed request whose computation failed.
   */
  ORBA_STATUS_COMPUTATION = 4,
  ORBA_STATUS_PANIC = 5,
} OrbaStatus;

/**
 * An ordered space. Create with [`orba_space_from_json`], release with [`orba_space_free`].
 */
typedef struct OrbaSpace OrbaSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *orba_version(void);

/**
 * Copy of the last error message on this thread, or NULL if there is none.
 * Free the result with [`orba_string_free`].
 */
char *orba_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library that was not freed yet.
 */
void orba_string_free(char *s);

/**
 * Builds a space from a JSON descriptor.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum OrbaStatus orba_space_from_json(const char *json, struct OrbaSpace **out);

/**
 * # Safety
 * `space` must be NULL or a handle from [`orba_space_from_json`] not yet freed.
 */
void orba_space_free(struct OrbaSpace *space);

/**
 * # Safety
 * `space` must be a live handle and `out` writable.
 */
enum OrbaStatus orba_space_dim(const struct OrbaSpace *space, size_t *out);

/**
 * `‖x‖`.
 *
 * # Safety
 * `x` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_norm(const struct OrbaSpace *space, const double *x, size_t len, double *out);

/**
 * `x ⪯ y`.
 *
 * # Safety
 * `x` and `y` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_leq(const struct OrbaSpace *space,
                         const double *x,
                         const double *y,
                         size_t len,
                         bool *out);

/**
 * `x ∈ D⁺`.
 *
 * # Safety
 * `x` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_cone_contains(const struct OrbaSpace *space,
                                   const double *x,
                                   size_t len,
                                   bool *out);

/**
 * Minimal `a ∈ D⁺` with `-a ⪯ x ⪯ a`, written to `a_out` (`len` doubles), and `‖a‖`.
 *
 * # Safety
 * `x` must point to `len` doubles, `a_out` to `len` writable doubles and `value_out` be writable.
 */
enum OrbaStatus orba_min_dominator(const struct OrbaSpace *space,
                                   const double *x,
                                   size_t len,
                                   double *a_out,
                                   double *value_out);

/**
 * `N(x) = inf { ‖a‖ : a ∈ D⁺, -a ⪯ x ⪯ a }`.
 *
 * # Safety
 * `x` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_n_norm(const struct OrbaSpace *space,
                            const double *x,
                            size_t len,
                            double *out);

/**
 * Seeded sampling of the dominating constant and the normality ratio.
 *
 * # Safety
 * The output pointers must be writable.
 */
enum OrbaStatus orba_scan(const struct OrbaSpace *space,
                          size_t samples,
                          uint64_t seed,
                          double *c_lower_out,
                          double *normality_out);

/**
 * `Σ |f_i| w_i ν_i`.
 *
 * # Safety
 * `w`, `nu` and `f` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_koethe_norm(const double *w,
                                 const double *nu,
                                 const double *f,
                                 size_t len,
                                 double *out);

/**
 * The merged norm of two weighted L1 function norms.
 *
 * # Safety
 * `w1`, `w2`, `nu` and `f` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_merged_norm(const double *w1,
                                 const double *w2,
                                 const double *nu,
                                 const double *f,
                                 size_t len,
                                 double *out);

/**
 * `max |f_i| / u_i`; fails when `f` leaves the ideal of `u`.
 *
 * # Safety
 * `u` and `f` must point to `len` doubles and `out` must be writable.
 */
enum OrbaStatus orba_principal_ideal_norm(const double *u,
                                          const double *f,
                                          size_t len,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORBA_H */
