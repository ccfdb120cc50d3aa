#ifndef PATHOLAB_H
#define PATHOLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PatholabStatus {
  PATHOLAB_STATUS_OK = 0,
  PATHOLAB_STATUS_NULL_POINTER = 1,
  PATHOLAB_STATUS_INVALID_UTF8 = 2,
  PATHOLAB_STATUS_PARSE_ERROR = 3,
  PATHOLAB_STATUS_NOT_NEARLY_CLOSED = 4,
  PATHOLAB_STATUS_UNSUPPORTED = 5,
  PATHOLAB_STATUS_INTERNAL = 6,
} PatholabStatus;

typedef enum PatholabVerdict {
  PATHOLAB_VERDICT_PROVED_PATHO = 0,
  PATHOLAB_VERDICT_CERTIFIED_NON_PATHO = 1,
  PATHOLAB_VERDICT_UNKNOWN = 2,
  PATHOLAB_VERDICT_UNSUPPORTED = 3,
} PatholabVerdict;

/**
 * A parsed formula.
 */
typedef struct PatholabFormula PatholabFormula;

/**
 * Search budgets.
 */
typedef struct PatholabConfig {
  uint32_t refute_depth;
  uint64_t refute_steps;
  uint32_t model_size;
} PatholabConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Default budgets: depth 3, 50000 steps, universes up to 5 elements.
 */
struct PatholabConfig patholab_config_default(void);

/**
 * Parse `text` into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum PatholabStatus patholab_formula_parse(const char *text, struct PatholabFormula **out);

/**
 * Release a handle; null is ignored.
 *
 * # Safety
 * `f` must come from `patholab_formula_parse` and not be used afterwards.
 */
void patholab_formula_free(struct PatholabFormula *f);

/**
 * Print the formula in canonical concrete syntax.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum PatholabStatus patholab_formula_print(const struct PatholabFormula *f, char **out);

/**
 * Release a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void patholab_string_free(char *s);

/**
 * Full classification report of `text` as JSON. A null `config` means
 * default budgets.
 *
 * # Safety
 * `text` must be a nul-terminated string, `config` null or valid, `out`
 * a valid pointer.
 */
enum PatholabStatus patholab_classify_json(const char *text,
                                           const struct PatholabConfig *config,
                                           char **out);

/**
 * Refutation and model search on the formula; closed formulas are wrapped
 * as `B & (x = x)`.
 *
 * # Safety
 * `f` must be a live handle, `config` null or valid, `out` a valid pointer.
 */
enum PatholabStatus patholab_patho_check(const struct PatholabFormula *f,
                                         const struct PatholabConfig *config,
                                         enum PatholabVerdict *out);

/**
 * Whether the formula admits a stratification.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum PatholabStatus patholab_stratified(const struct PatholabFormula *f, bool *out);

/**
 * Model certificate text for the formula, or null in `*out` when no model
 * exists up to `max_size` elements.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum PatholabStatus patholab_find_model(const struct PatholabFormula *f,
                                        uint32_t max_size,
                                        char **out);

/**
 * Message of the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *patholab_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHOLAB_H */
