#ifndef LOOPCOCYCLE_H
#define LOOPCOCYCLE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LcStatus {
  LC_STATUS_OK = 0,
  LC_STATUS_NULL_POINTER = 1,
  LC_STATUS_INVALID_UTF8 = 2,
  LC_STATUS_CONFIG = 3,
  LC_STATUS_INVALID_ALGEBRA = 4,
  LC_STATUS_INVALID_ARGUMENT = 5,
  LC_STATUS_COMPUTATION = 6,
  LC_STATUS_UNSTABLE = 7,
  LC_STATUS_CHECKS_FAILED = 8,
  LC_STATUS_PANIC = 9,
} LcStatus;

/**
 * Opaque handle to a multiloop algebra built from a JSON run configuration.
 */
typedef struct LcMultiloop LcMultiloop;

/**
 * Result of comparing `dim H²` with the invariant target at one weight.
 */
typedef struct LcTargetVerdict {
  size_t h2_dim;
  /**
   * `dim H²` at cutoff `D + 1`.
   */
  size_t h2_dim_next;
  size_t target_dim;
  bool stable;
  bool matches;
} LcTargetVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *lc_last_error(void);

/**
 * Build a multiloop algebra from a JSON run configuration.
 *
 * # Safety
 * `config_json` must be a nul-terminated string and `out` a valid pointer.
 */
enum LcStatus lc_multiloop_new(const char *config_json, struct LcMultiloop **out);

/**
 * # Safety
 * `handle` must come from [`lc_multiloop_new`] and not be used afterwards.
 */
void lc_multiloop_free(struct LcMultiloop *handle);

/**
 * Number of torus variables `n`.
 *
 * # Safety
 * `handle` must be live and `out` valid.
 */
enum LcStatus lc_multiloop_nvars(const struct LcMultiloop *handle, size_t *out);

/**
 * Dimension of the degree-`a` component `t^a ⊗ g_{\bar a}`.
 *
 * # Safety
 * `weight` must point to `n` values; `handle` and `out` must be valid.
 */
enum LcStatus lc_graded_dim(const struct LcMultiloop *handle,
                            const int64_t *weight,
                            size_t n,
                            size_t *out);

/**
 * `dim H²` of the windowed complex at weight `w` and cutoff `D`.
 *
 * # Safety
 * `weight` must point to `n` values; `handle` and `out` must be valid.
 */
enum LcStatus lc_h2_dim(const struct LcMultiloop *handle,
                        const int64_t *weight,
                        size_t n,
                        uint32_t cutoff,
                        size_t *out);

/**
 * Compare `dim H²` with the invariant target. Unstable weights still fill
 * `out` (with `stable = false`) and return [`LcStatus::Unstable`].
 *
 * # Safety
 * `weight` must point to `n` values; `handle` and `out` must be valid.
 */
enum LcStatus lc_compare_to_target(const struct LcMultiloop *handle,
                                   const int64_t *weight,
                                   size_t n,
                                   uint32_t cutoff,
                                   struct LcTargetVerdict *out);

/**
 * `ω(t^a ⊗ x_i, t^b ⊗ y_j)` rendered as text, where `x_i` and `y_j` are
 * the `i`-th and `j`-th basis vectors of the graded pieces at `a` and `b`.
 * Free the result with [`lc_string_free`].
 *
 * # Safety
 * `a` and `b` must point to `n` values; `handle` and `out` must be valid.
 */
enum LcStatus lc_omega_string(const struct LcMultiloop *handle,
                              const int64_t *a,
                              size_t i,
                              const int64_t *b,
                              size_t j,
                              size_t n,
                              char **out);

/**
 * Run a command (`construct`, `verify`, `h2-scan`, `density-demo`) and
 * return its JSON report. A report whose checks fail is still returned,
 * with [`LcStatus::ChecksFailed`]. `jobs = 0` uses the default pool.
 *
 * # Safety
 * `command` and `config_json` must be nul-terminated strings; `out` valid.
 */
enum LcStatus lc_run_command(const char *command,
                             const char *config_json,
                             uint64_t seed,
                             uint32_t jobs,
                             char **out);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void lc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOOPCOCYCLE_H */
