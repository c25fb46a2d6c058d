#ifndef KOLMO_H
#define KOLMO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every call.
 */
typedef enum KolmoStatus {
  KOLMO_STATUS_OK = 0,
  /**
   * Null pointer, invalid UTF-8 or malformed JSON.
   */
  KOLMO_STATUS_INVALID_ARGUMENT = 1,
  KOLMO_STATUS_DIMENSION = 2,
  KOLMO_STATUS_NUMERICAL = 3,
  KOLMO_STATUS_DOMAIN = 4,
  KOLMO_STATUS_PRECONDITION = 5,
  KOLMO_STATUS_LAYOUT = 6,
  KOLMO_STATUS_SIZE = 7,
  KOLMO_STATUS_OWNERSHIP = 8,
  KOLMO_STATUS_CONDITIONING = 9,
  KOLMO_STATUS_NORMALIZATION = 10,
  KOLMO_STATUS_RATIONALIZATION = 11,
  KOLMO_STATUS_INVALID_INPUT = 12,
  /**
   * A Rust panic was caught at the boundary.
   */
  KOLMO_STATUS_PANIC = 13,
} KolmoStatus;

/**
 * Outcome of a membership query, with its certificate.
 */
typedef struct KolmoMembership KolmoMembership;

/**
 * The index set `S` of a correlation polytope `C(n, S)`.
 */
typedef struct KolmoPairSet KolmoPairSet;

/**
 * A validated measurement setup.
 */
typedef struct KolmoSetup KolmoSetup;

/**
 * The classical space reproducing a setup's quantum probabilities.
 */
typedef struct KolmoUnifiedSpace KolmoUnifiedSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *kolmo_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void kolmo_string_free(char *s);

/**
 * `n` events and `pair_count` pairs given as `2 * pair_count` one-based
 * indices `i0, j0, i1, j1, ...`.
 *
 * # Safety
 * `pairs` must point to `2 * pair_count` integers; `out` must be writable.
 */
enum KolmoStatus kolmo_pair_set_new(size_t n,
                                    const uint32_t *pairs,
                                    size_t pair_count,
                                    struct KolmoPairSet **out);

/**
 * The Clauser–Horne layout `n = 4`, `S = {13, 14, 23, 24}`.
 *
 * # Safety
 * `out` must be writable.
 */
enum KolmoStatus kolmo_pair_set_s4(struct KolmoPairSet **out);

/**
 * Number of coordinates `n + |S|`.
 *
 * # Safety
 * `set` must be a live handle; `out` must be writable.
 */
enum KolmoStatus kolmo_pair_set_len(const struct KolmoPairSet *set, size_t *out);

/**
 * # Safety
 * `set` must be null or a live handle, not used afterwards.
 */
void kolmo_pair_set_free(struct KolmoPairSet *set);

/**
 * Decides `p ∈ C(n, S)` for `values` laid out as singles `p1..pn` then the
 * pairs of `set` in lexicographic order.
 *
 * # Safety
 * `set` must be live, `values` must hold `len` doubles, `out` writable.
 */
enum KolmoStatus kolmo_check_membership(const struct KolmoPairSet *set,
                                        const double *values,
                                        size_t len,
                                        struct KolmoMembership **out);

/**
 * # Safety
 * `m` must be live; `out` writable.
 */
enum KolmoStatus kolmo_membership_is_member(const struct KolmoMembership *m, bool *out);

/**
 * Reconstruction residual for members, phase-one infeasibility otherwise.
 *
 * # Safety
 * `m` must be live; `out` writable.
 */
enum KolmoStatus kolmo_membership_residual(const struct KolmoMembership *m, double *out);

/**
 * JSON with `member`, `residual`, certificate `weights` keyed by vertex
 * bit string and, for rejected `(4, S4)` vectors, the `violated_facet`.
 *
 * # Safety
 * `m` must be live; `out` writable. Free the string with
 * [`kolmo_string_free`].
 */
enum KolmoStatus kolmo_membership_to_json(const struct KolmoMembership *m, char **out);

/**
 * # Safety
 * `m` must be null or a live handle, not used afterwards.
 */
void kolmo_membership_free(struct KolmoMembership *m);

/**
 * Parses a setup file (the JSON accepted by `kolmo build`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` writable.
 */
enum KolmoStatus kolmo_setup_from_json(const char *json, struct KolmoSetup **out);

/**
 * # Safety
 * `setup` must be null or a live handle, not used afterwards.
 */
void kolmo_setup_free(struct KolmoSetup *setup);

/**
 * Builds the unified space; `full_table` keeps zero-probability patterns.
 *
 * # Safety
 * `setup` must be live; `out` writable.
 */
enum KolmoStatus kolmo_unified_space_build(const struct KolmoSetup *setup,
                                           bool full_table,
                                           struct KolmoUnifiedSpace **out);

/**
 * Number of elementary events, and how many have positive weight.
 *
 * # Safety
 * `space` must be live; both outputs writable.
 */
enum KolmoStatus kolmo_unified_space_counts(const struct KolmoUnifiedSpace *space,
                                            size_t *points,
                                            size_t *positive);

/**
 * Probability of a named event (`pattern:1010`, `a=up`, `performed:a`),
 * as an exact `"num/den"` string and as a double.
 *
 * # Safety
 * `space` must be live, `event` NUL-terminated, outputs writable. Free
 * `out_exact` with [`kolmo_string_free`].
 */
enum KolmoStatus kolmo_unified_space_probability(const struct KolmoUnifiedSpace *space,
                                                 const char *event,
                                                 char **out_exact,
                                                 double *out_value);

/**
 * The space as JSON: points with `"num/den"` weights and named events.
 *
 * # Safety
 * `space` must be live; `out` writable. Free with [`kolmo_string_free`].
 */
enum KolmoStatus kolmo_unified_space_to_json(const struct KolmoUnifiedSpace *space, char **out);

/**
 * # Safety
 * `space` must be null or a live handle, not used afterwards.
 */
void kolmo_unified_space_free(struct KolmoUnifiedSpace *space);

/**
 * Runs a named scenario (`example-one`, `double-slit`, `coin`, `epr`) and
 * returns its JSON report and overall verdict.
 *
 * # Safety
 * `name` must be NUL-terminated; outputs writable. Free `out_json` with
 * [`kolmo_string_free`].
 */
enum KolmoStatus kolmo_run_scenario(const char *name, char **out_json, bool *out_passed);

/**
 * `tr(W E)` for a density matrix and a projector of size `dim`, both
 * row-major with interleaved real and imaginary parts (`2 * dim * dim`
 * doubles each).
 *
 * # Safety
 * `density` and `projector` must each hold `2 * dim * dim` doubles; `out`
 * writable.
 */
enum KolmoStatus kolmo_gleason_measure(size_t dim,
                                       const double *density,
                                       const double *projector,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KOLMO_H */
