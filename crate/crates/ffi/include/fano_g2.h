#ifndef FANO_G2_H
#define FANO_G2_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum {
  FANO_STATUS_OK = 0,
  FANO_STATUS_NULL_POINTER = 1,
  FANO_STATUS_INVALID_ARGUMENT = 2,
  FANO_STATUS_INVALID_UTF8 = 3,
  FANO_STATUS_COMPUTATION = 4,
  FANO_STATUS_OVERFLOW = 5,
  FANO_STATUS_PANIC = 6,
} FanoStatus;

/**
 * Opaque handle holding the octonion algebra and lazily built caches.
 */
typedef struct FanoContext FanoContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a context. `cache_dir` may be null to disable the on-disk cache.
 * Returns null on failure.
 *
 * # Safety
 * `cache_dir` must be null or a valid NUL-terminated string.
 */
FanoContext *fano_context_new(const char *cache_dir);

/**
 * Releases a context. Null is ignored.
 *
 * # Safety
 * `ctx` must be null or a pointer from [`fano_context_new`] not yet freed.
 */
void fano_context_free(FanoContext *ctx);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void fano_string_free(char *s);

/**
 * The message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *fano_last_error_message(void);

/**
 * Runs a verification suite (`all` for every suite) over `field`
 * (`q`, `qi` or `fp:<p>`; null means `q`) and writes the JSON report.
 * A report with failing checks is still `Ok`; inspect its `pass` field.
 *
 * # Safety
 * Pointers must be valid; `out_json` receives a string to free.
 */
FanoStatus fano_verify_json(const FanoContext *ctx,
                            const char *suite,
                            const char *field,
                            char **out_json);

/**
 * Multiplies two integer octonions given as 8 coefficients on `1, e1, …, e7`.
 *
 * # Safety
 * `a`, `b` and `out` must each point to 8 `int64_t` values.
 */
FanoStatus fano_octonion_mul(const FanoContext *ctx,
                             const int64_t *a,
                             const int64_t *b,
                             int64_t *out);

/**
 * Writes the basis product `e_a · e_b` (indices 0..=7, 0 is the unit) as a
 * sign and an index.
 *
 * # Safety
 * `out_sign` and `out_index` must be valid.
 */
FanoStatus fano_basis_product(const FanoContext *ctx,
                              uint8_t a,
                              uint8_t b,
                              int8_t *out_sign,
                              uint8_t *out_index);

/**
 * Writes the bracket `[X(left), X(right)]` as JSON, with incident pairs
 * written like `(P1,D1)`.
 *
 * # Safety
 * Pointers must be valid; `out_json` receives a string to free.
 */
FanoStatus fano_bracket_json(const FanoContext *ctx,
                             const char *left,
                             const char *right,
                             char **out_json);

/**
 * Writes the records for `aut`, `aug-aut`, `comp-factors` or
 * `oriented-maps` as JSON lines.
 *
 * # Safety
 * Pointers must be valid; `out_jsonl` receives a string to free.
 */
FanoStatus fano_enumerate_jsonl(const FanoContext *ctx, const char *target, char **out_jsonl);

/**
 * Writes the order of the covering group of automorphisms of the octonion
 * algebra that permute the signed basis.
 *
 * # Safety
 * Pointers must be valid.
 */
FanoStatus fano_aug_group_order(const FanoContext *ctx, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FANO_G2_H */
