#ifndef POISSON_FORGE_H
#define POISSON_FORGE_H

#include <stdint.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  /**
   * The computation ran and a verification failed.
   */
  PF_STATUS_FAILED = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_PARSE_ERROR = 3,
  PF_STATUS_SCHEMA_ERROR = 4,
  PF_STATUS_NULL_POINTER = 5,
  PF_STATUS_INTERNAL = 6,
} PfStatus;

/**
 * Opaque algebra handle.
 */
typedef struct PfAlgebra PfAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The built-in algebra. Free with [`pf_algebra_free`].
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PfStatus pf_algebra_builtin(struct PfAlgebra **out);

/**
 * Load an algebra from its JSON definition.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum PfStatus pf_algebra_from_json(const char *json, struct PfAlgebra **out);

/**
 * # Safety
 * `alg` must come from this library and not be used afterwards. Null is ignored.
 */
void pf_algebra_free(struct PfAlgebra *alg);

/**
 * `{f, g}` in `alg`, with every generator allowed a negative exponent.
 *
 * # Safety
 * Pointers must be valid; `f`, `g` nul-terminated.
 */
enum PfStatus pf_bracket(const struct PfAlgebra *alg, const char *f, const char *g, char **out);

/**
 * Normal form in the quotient of the built-in algebra. `alpha`/`beta` may
 * be null (symbolic) or a rational such as `"3/2"`.
 *
 * # Safety
 * `expr` must be nul-terminated, `alpha`/`beta` null or nul-terminated,
 * `out` valid.
 */
enum PfStatus pf_normal_form(const char *expr, const char *alpha, const char *beta, char **out);

/**
 * Run one verification suite (or `"all"`) and write its JSON report.
 * Returns `PF_STATUS_FAILED` when the report is written but some item failed.
 *
 * # Safety
 * `name` must be nul-terminated and `out_json` valid.
 */
enum PfStatus pf_verify_suite(const char *name, uint64_t seed, char **out_json);

/**
 * Message for the last non-OK status on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *pf_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void pf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POISSON_FORGE_H */
