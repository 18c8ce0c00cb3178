#ifndef HYPERPATH_H
#define HYPERPATH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum HpStatus {
  HP_STATUS_OK = 0,
  HP_STATUS_NULL_POINTER = 1,
  HP_STATUS_INVALID_ARGUMENT = 2,
  HP_STATUS_DOMAIN = 3,
  HP_STATUS_PRECONDITION = 4,
  HP_STATUS_CAPACITY = 5,
  HP_STATUS_UNSUPPORTED = 6,
  HP_STATUS_PARSE = 7,
  HP_STATUS_IO = 8,
  /**
   * The job ran but a certificate in its report failed.
   */
  HP_STATUS_CERTIFICATE_FAILED = 9,
  HP_STATUS_PANIC = 10,
} HpStatus;

/**
 * A finite subset of a ground space, in canonical order.
 */
typedef struct HpSet HpSet;

/**
 * A ground metric space.
 */
typedef struct HpSpace HpSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Euclidean space of dimension `dim >= 1`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum HpStatus hp_space_euclidean(size_t dim, struct HpSpace **out);

/**
 * The union of the two coordinate axes of the plane, with the taxicab metric.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum HpStatus hp_space_taxicab_cross(struct HpSpace **out);

/**
 * Space from a JSON configuration such as `{"kind":"euclidean","dim":2}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a valid pointer.
 */
enum HpStatus hp_space_from_json(const char *json, struct HpSpace **out);

/**
 * # Safety
 * `space` must be null or a handle from this library, not yet freed.
 */
void hp_space_free(struct HpSpace *space);

/**
 * Number of doubles describing one point of `space`.
 *
 * # Safety
 * `space` must be a live handle.
 */
size_t hp_space_point_width(const struct HpSpace *space);

/**
 * Set of `count` points read row-major from `coords`, each
 * `hp_space_point_width(space)` doubles long. Duplicates merge.
 *
 * # Safety
 * `coords` must point to `count * width` doubles; `out` must be valid.
 */
enum HpStatus hp_set_new(const struct HpSpace *space,
                         const double *coords,
                         size_t count,
                         struct HpSet **out);

/**
 * Number of distinct points in the set.
 *
 * # Safety
 * `set` must be null or a live handle.
 */
size_t hp_set_len(const struct HpSet *set);

/**
 * Copies the canonical coordinates, row-major, into `buf` of `cap`
 * doubles; `cap` must be at least `len * width`.
 *
 * # Safety
 * `buf` must point to `cap` writable doubles.
 */
enum HpStatus hp_set_coords(const struct HpSet *set, double *buf, size_t cap);

/**
 * # Safety
 * `set` must be null or a handle from this library, not yet freed.
 */
void hp_set_free(struct HpSet *set);

/**
 * Hausdorff distance between two sets of the same space.
 *
 * # Safety
 * All handles must be live; `out` must be valid.
 */
enum HpStatus hp_hausdorff(const struct HpSpace *space,
                           const struct HpSet *a,
                           const struct HpSet *b,
                           double *out);

/**
 * Two-leg path from `x` to `y` through sets of at most `n` points. Writes
 * the intermediate set, the grid length estimate and the Lipschitz
 * constant of the path. Null out-pointers are skipped.
 *
 * # Safety
 * All handles must be live; non-null out-pointers must be valid.
 */
enum HpStatus hp_two_leg(const struct HpSpace *space,
                         const struct HpSet *x,
                         const struct HpSet *y,
                         size_t n,
                         struct HpSet **out_midpoint,
                         double *out_length,
                         double *out_lipschitz);

/**
 * Runs a JSON job (the format accepted by `hyperpath --job`) and returns its
 * report in `out`. The report is also produced when the status is
 * `HP_STATUS_CERTIFICATE_FAILED`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be valid.
 */
enum HpStatus hp_run_job_json(const char *json, char **out);

/**
 * Message for the last failing call on this thread; empty after success.
 * Valid until the next call into this library on the same thread.
 */
const char *hp_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void hp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPERPATH_H */
