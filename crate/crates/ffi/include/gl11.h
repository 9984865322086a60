#ifndef GL11_H
#define GL11_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Gl11Status {
  GL11_STATUS_OK = 0,
  GL11_STATUS_NULL_POINTER = 1,
  GL11_STATUS_INVALID_UTF8 = 2,
  GL11_STATUS_PARSE = 3,
  GL11_STATUS_INVALID_INPUT = 4,
  GL11_STATUS_COMPUTATION = 5,
  /**
   * the call succeeded but a verification failed
   */
  GL11_STATUS_VERIFICATION_FAILED = 6,
  GL11_STATUS_PANIC = 7,
} Gl11Status;

/**
 * Opaque module specification.
 */
typedef struct Gl11Spec Gl11Spec;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *gl11_last_error(void);

/**
 * Parse a TOML spec (`weights`, `points`, `twist`) into a new handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum Gl11Status gl11_spec_from_toml(const char *text, struct Gl11Spec **out);

/**
 * Deterministic pseudo-random cyclic spec; `split` forces γ to factor over ℚ.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum Gl11Status gl11_spec_random(uint64_t seed,
                                 uintptr_t k,
                                 int64_t weight_budget,
                                 bool split,
                                 struct Gl11Spec **out);

/**
 * # Safety
 * `spec` must come from this library and not be used afterwards. NULL is ignored.
 */
void gl11_spec_free(struct Gl11Spec *spec);

/**
 * Number of tensor factors, or 0 for NULL.
 *
 * # Safety
 * `spec` must be NULL or a live handle.
 */
uintptr_t gl11_spec_factors(const struct Gl11Spec *spec);

/**
 * The spec as TOML text.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum Gl11Status gl11_spec_to_toml(const struct Gl11Spec *spec, char **out);

/**
 * Spectral report as JSON; `level` < 0 selects all levels. Returns
 * `VerificationFailed` (with the report written) when it is not internally consistent.
 *
 * # Safety
 * `spec` must be a live handle and `out` a valid pointer.
 */
enum Gl11Status gl11_spectrum_json(const struct Gl11Spec *spec, int64_t level, char **out);

/**
 * Runs a suite ("rtt", "bethe", "algebra", "norms", "fusion", "weyl" or "all") with
 * the given caps (0 selects the default) and writes the JSON report.
 *
 * # Safety
 * `suite` must be a nul-terminated string and `out` a valid pointer.
 */
enum Gl11Status gl11_verify_json(const char *suite, uintptr_t max_k, uintptr_t max_n, char **out);

/**
 * Release a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gl11_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GL11_H */
