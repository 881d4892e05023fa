#ifndef BECKDIFF_H
#define BECKDIFF_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

/**
 * Result codes. Values are stable.
 */
typedef enum BdStatus {
  BD_OK = 0,
  /**
   * A required pointer was null or a string was not UTF-8.
   */
  BD_NULL_OR_INVALID_ARGUMENT = 1,
  /**
   * Malformed JSON, grammar errors, inconsistent tables.
   */
  BD_INPUT_ERROR = 2,
  /**
   * The input is well formed but fails the mathematical check
   * (for example a kernel that does not square to zero).
   */
  BD_CHECK_FAILED = 3,
  BD_RESOURCE_LIMIT = 4,
  /**
   * A panic was caught at the boundary.
   */
  BD_INTERNAL_ERROR = 5,
} BdStatus;

/**
 * A finitely presented algebra.
 */
typedef struct BdAlgebra BdAlgebra;

/**
 * A verified Beck torsor between finite ring tables.
 */
typedef struct BdTorsor BdTorsor;

/**
 * Message for the last failing call on this thread, or null. The pointer is
 * valid until the next failing call on this thread.
 */
const char *bd_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bd_version(void);

/**
 * Parses an algebra presentation such as
 * `{"base":{"kind":"Fp","p":5},"generators":["x"],"relations":["x^2 - 2"]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum BdStatus bd_algebra_from_json(const char *json, struct BdAlgebra **out);

/**
 * # Safety
 * `a` must be null or a handle from `bd_algebra_from_json` not yet freed.
 */
void bd_algebra_free(struct BdAlgebra *a);

/**
 * Number of generators of the algebra.
 *
 * # Safety
 * `a` must be a live algebra handle.
 */
enum BdStatus bd_algebra_num_generators(const struct BdAlgebra *a, size_t *out);

/**
 * Whether Ω of the algebra over its base is the zero module.
 *
 * # Safety
 * `a` must be a live algebra handle and `out` writable.
 */
enum BdStatus bd_kahler_is_zero(const struct BdAlgebra *a, bool *out);

/**
 * Formal unramifiedness; when false, a witness pair of distinct lifts was
 * built and verified (finite algebras) before returning.
 *
 * # Safety
 * `a` must be a live algebra handle and `out` writable.
 */
enum BdStatus bd_unramified(const struct BdAlgebra *a, bool *out);

/**
 * Verifies `{"total": table, "base": table, "map": [...]}` as a torsor.
 * Returns `BD_CHECK_FAILED` when the surjection is not square-zero.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum BdStatus bd_torsor_from_json(const char *json, struct BdTorsor **out);

/**
 * # Safety
 * `t` must be null or a handle from `bd_torsor_from_json` not yet freed.
 */
void bd_torsor_free(struct BdTorsor *t);

/**
 * # Safety
 * `t` must be a live torsor handle and `out` writable.
 */
enum BdStatus bd_torsor_is_split(const struct BdTorsor *t, bool *out);

/**
 * Size of the kernel module `M`.
 *
 * # Safety
 * `t` must be a live torsor handle and `out` writable.
 */
enum BdStatus bd_torsor_kernel_size(const struct BdTorsor *t, size_t *out);

/**
 * Whether post-composition `Hom(B, Z) → Hom(B, Y)` is injective.
 *
 * # Safety
 * Handles must be live and `out` writable.
 */
enum BdStatus bd_lift_injective(const struct BdAlgebra *a, const struct BdTorsor *t, bool *out);

#endif  /* BECKDIFF_H */
