#ifndef CSPADV_H
#define CSPADV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CspadvStatus {
  CSPADV_STATUS_OK = 0,
  CSPADV_STATUS_NULL_POINTER = 1,
  CSPADV_STATUS_INVALID_UTF8 = 2,
  CSPADV_STATUS_PARSE = 3,
  CSPADV_STATUS_INVALID_ARGUMENT = 4,
  CSPADV_STATUS_PRECONDITION = 5,
  CSPADV_STATUS_INTERNAL = 6,
} CspadvStatus;

/**
 * Opaque instance handle.
 */
typedef struct CspadvInstance CspadvInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failed call on this thread, or null. The
 * pointer stays valid until the next call on the same thread.
 */
const char *cspadv_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *cspadv_version(void);

/**
 * Parses the text instance format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum CspadvStatus cspadv_instance_parse(const char *text, struct CspadvInstance **out);

/**
 * Builds an instance from a generator family name such as `"kxor"` or
 * `"triangle-free"`. Unused size parameters are ignored.
 *
 * # Safety
 * `kind` must be a NUL-terminated string and `out` writable.
 */
enum CspadvStatus cspadv_instance_generate(const char *kind,
                                           size_t n,
                                           size_t k,
                                           size_t d,
                                           uint64_t seed,
                                           struct CspadvInstance **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void cspadv_instance_free(struct CspadvInstance *inst);

/**
 * Number of variables, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t cspadv_instance_num_vars(const struct CspadvInstance *inst);

/**
 * Number of constraints, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t cspadv_instance_num_constraints(const struct CspadvInstance *inst);

/**
 * Serializes to the text instance format.
 *
 * # Safety
 * `inst` must be a live handle and `out` writable.
 */
enum CspadvStatus cspadv_instance_to_text(const struct CspadvInstance *inst, char **out);

/**
 * Number of constraints satisfied by the ±1 assignment `x[0..len]`.
 *
 * # Safety
 * `inst` must be a live handle, `x` readable for `len` bytes and
 * `out_satisfied` writable.
 */
enum CspadvStatus cspadv_instance_satisfied(const struct CspadvInstance *inst,
                                            const int8_t *x,
                                            size_t len,
                                            size_t *out_satisfied);

/**
 * Validation and triangle-freeness as a JSON object with fields `valid`,
 * `violations` and `triangle_free`.
 *
 * # Safety
 * `inst` must be a live handle and `out_json` writable.
 */
enum CspadvStatus cspadv_instance_check(const struct CspadvInstance *inst, char **out_json);

/**
 * Runs the solver named `alg` (`"xor3"`, `"xor3-derand"`, `"advrand"`,
 * `"trifree"` or `"brute"`). The JSON report goes to `out_json` when it is
 * not null; the assignment goes to `x_out` when it is not null, which must
 * hold exactly `x_len` = number of variables entries.
 *
 * # Safety
 * `inst` must be a live handle, `alg` a NUL-terminated string, `x_out`
 * null or writable for `x_len` bytes, and `out_json` null or writable.
 */
enum CspadvStatus cspadv_solve(const struct CspadvInstance *inst,
                               const char *alg,
                               uint64_t seed,
                               int8_t *x_out,
                               size_t x_len,
                               char **out_json);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void cspadv_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CSPADV_H */
