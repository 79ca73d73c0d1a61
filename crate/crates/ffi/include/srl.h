#ifndef SRL_H
#define SRL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrlStatus {
  SRL_STATUS_OK = 0,
  SRL_STATUS_NULL_ARGUMENT = 1,
  SRL_STATUS_INVALID_UTF8 = 2,
  SRL_STATUS_PARSE_ERROR = 3,
  SRL_STATUS_UNSUPPORTED = 4,
  SRL_STATUS_INFEASIBLE = 5,
  SRL_STATUS_INVALID_ARGUMENT = 6,
  SRL_STATUS_INTERNAL = 7,
} SrlStatus;

/**
 * A built group.
 */
typedef struct SrlGroup SrlGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the group named by `spec`, e.g. `"PSL(2,7)"`. On success `*out`
 * owns a handle to release with `srl_group_free`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrlStatus srl_group_new(const char *spec, struct SrlGroup **out);

/**
 * # Safety
 * `g` must come from `srl_group_new` and not be used afterwards. Null is
 * ignored.
 */
void srl_group_free(struct SrlGroup *g);

/**
 * Number of points the group acts on.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SrlStatus srl_group_degree(const struct SrlGroup *g, size_t *out);

/**
 * Group order as a decimal string.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SrlStatus srl_group_order(const struct SrlGroup *g, char **out);

/**
 * Per-class verdicts as a JSON report.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SrlStatus srl_survey_json(const struct SrlGroup *g, uint64_t seed, char **out);

/**
 * Witness search for the element given in 1-based cycle notation. A
 * `budget` of zero searches exhaustively; otherwise `budget` random tuples
 * are drawn from `seed`.
 *
 * # Safety
 * `g` must be a live handle, `cycles` a NUL-terminated string and `out` a
 * valid pointer.
 */
enum SrlStatus srl_witness_json(const struct SrlGroup *g,
                                const char *cycles,
                                size_t k,
                                uint64_t budget,
                                uint64_t seed,
                                char **out);

/**
 * The solvable radical as JSON.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum SrlStatus srl_radical_json(const struct SrlGroup *g, char **out);

/**
 * Field-automorphism bound audit for `family` in {"psl2", "sz", "ree"}.
 *
 * # Safety
 * `family` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrlStatus srl_audit_json(const char *family, uint64_t q0, uint64_t p, char **out);

/**
 * Canonical form of a group spec, as JSON `{"canonical": ...}`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrlStatus srl_parse_json(const char *spec, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void srl_string_free(char *s);

/**
 * Message for the last failure on this thread; empty if none. Valid until
 * the next failing call on the same thread.
 */
const char *srl_last_error(void);

/**
 * Static description of a status code; unknown codes give "unknown".
 */
const char *srl_status_message(int32_t status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SRL_H */
