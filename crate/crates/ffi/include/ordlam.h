#ifndef ORDLAM_H
#define ORDLAM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ORDLAM_OK 0

#define ORDLAM_ERR_PARSE 1

#define ORDLAM_ERR_FUEL 2

#define ORDLAM_ERR_INTERNAL 3

#define ORDLAM_ERR_NOT_ORDERED 4

#define ORDLAM_ERR_INVALID_ARG 5

#define ORDLAM_ERR_UTF8 6

#define ORDLAM_STRATEGY_ORDERED_LIST 0

#define ORDLAM_STRATEGY_ORDERED_TREE 1

#define ORDLAM_STRATEGY_CLOSURES 2

#define ORDLAM_STRATEGY_BETA_NORMAL 3

/**
 * Print the weak head normal form (beta-normal prints its normal form).
 */
#define ORDLAM_MODE_WHNF 0

/**
 * Print the full normal form.
 */
#define ORDLAM_MODE_NF 1

/**
 * A lambda term.
 */
typedef struct OrdlamTerm OrdlamTerm;

/**
 * Result of [`ordlam_check`].
 */
typedef struct OrdlamCheckReport {
  uint64_t steps;
  /**
   * Steps per rule; entry `i` counts rule `i + 1`.
   */
  uint64_t rule_counts[6];
  uint64_t alpha_checked;
  uint64_t beta_checked;
  uint64_t alpha_failures;
  uint64_t beta_failures;
  uint64_t weight_failures;
  bool fuel_exhausted;
  bool passed;
} OrdlamCheckReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses surface syntax (`\x. x`, application by juxtaposition).
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t ordlam_parse(const char *src, struct OrdlamTerm **out);

/**
 * Parses an ordered term in s-expression form. The term must be ordered
 * and have no unbound dots, otherwise `ORDLAM_ERR_NOT_ORDERED` is returned.
 *
 * # Safety
 * `src` must be a NUL-terminated string and `out` a valid pointer.
 */
int32_t ordlam_parse_ordered(const char *src, struct OrdlamTerm **out);

/**
 * Releases a term. Null is ignored.
 *
 * # Safety
 * `term` must come from this library and not be used afterwards.
 */
void ordlam_term_free(struct OrdlamTerm *term);

/**
 * Surface syntax of `term`.
 *
 * # Safety
 * `term` must be a live handle and `out` a valid pointer.
 */
int32_t ordlam_term_print(const struct OrdlamTerm *term, char **out);

/**
 * Ordered s-expression form of `term`.
 *
 * # Safety
 * `term` must be a live handle and `out` a valid pointer.
 */
int32_t ordlam_term_to_ordered(const struct OrdlamTerm *term, char **out);

/**
 * Evaluates `term` with one of the `ORDLAM_STRATEGY_*` strategies and
 * prints the result according to `mode` (`ORDLAM_MODE_*`). A `fuel` of 0
 * selects the default budget. When `steps` is not null it receives the
 * number of steps taken to reach the normal form (`ORDLAM_MODE_NF`) or the
 * weak head value.
 *
 * # Safety
 * `term` must be a live handle, `out` a valid pointer, `steps` null or valid.
 */
int32_t ordlam_eval(const struct OrdlamTerm *term,
                    int32_t strategy_code,
                    int32_t mode,
                    uint64_t fuel,
                    char **out,
                    uint64_t *steps);

/**
 * Runs the small-step machine on `term`, checking every step, and fills
 * `report`. Returns `ORDLAM_ERR_FUEL` when the budget ran out (the report is
 * still filled) and `ORDLAM_ERR_INTERNAL` when a check failed.
 *
 * # Safety
 * `term` must be a live handle and `report` a valid pointer.
 */
int32_t ordlam_check(const struct OrdlamTerm *term,
                     uint64_t fuel,
                     struct OrdlamCheckReport *report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ordlam_string_free(char *s);

/**
 * Message for the last failed call on this thread, empty after a success.
 * Valid until the next call into the library from the same thread.
 */
const char *ordlam_last_error(void);

/**
 * Library version as a static string.
 */
const char *ordlam_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ORDLAM_H */
