#ifndef RAYCLASS_H
#define RAYCLASS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every entry point.
 */
typedef enum {
  RC_STATUS_OK = 0,
  RC_STATUS_CHECK_FAILED = 1,
  RC_STATUS_INVALID_ARGUMENT = 2,
  RC_STATUS_NUMERICAL = 3,
  RC_STATUS_NULL_POINTER = 4,
  RC_STATUS_INVALID_UTF8 = 5,
  RC_STATUS_PANIC = 6,
} RcStatus;

/**
 * Working precision and tolerance.
 */
typedef struct RcContext RcContext;

/**
 * An imaginary quadratic field with its reduced forms.
 */
typedef struct RcField RcField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next call on the same thread.
 */
const char *rc_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void rc_string_free(char *s);

const char *rc_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to a writable handle slot.
 */
RcStatus rc_context_new(uint32_t bits, double eps, RcContext **out);

/**
 * # Safety
 * `ctx` must be NULL or a handle from `rc_context_new`.
 */
void rc_context_free(RcContext *ctx);

/**
 * # Safety
 * `out` must be a valid pointer to a writable handle slot.
 */
RcStatus rc_field_new(int64_t dk, RcField **out);

/**
 * # Safety
 * `field` must be NULL or a handle from `rc_field_new`.
 */
void rc_field_free(RcField *field);

/**
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
RcStatus rc_field_class_number(const RcField *field, uint64_t *out);

/**
 * `[K_(N) : K]`.
 *
 * # Safety
 * `field` must be a live handle and `out` writable.
 */
RcStatus rc_ray_class_degree(const RcField *field, int64_t level, uint64_t *out);

/**
 * `j(τ)` rounded to double precision.
 *
 * # Safety
 * `ctx` must be a live handle; `out_re` and `out_im` writable.
 */
RcStatus rc_eval_j(const RcContext *ctx, double re, double im, double *out_re, double *out_im);

/**
 * Curve identity at `θ` for level `N`; the JSON report goes to `out_json`.
 * Returns `CheckFailed` when the report does not pass.
 *
 * # Safety
 * `ctx` and `field` must be live handles; `out_json` writable.
 */
RcStatus rc_check_curve(const RcContext *ctx,
                        const RcField *field,
                        int64_t level,
                        bool relaxed,
                        char **out_json);

/**
 * Generation witness for a descriptor such as `"pair"`, `"y4"` or `"y12N"`.
 *
 * # Safety
 * `ctx` and `field` must be live handles, `descriptor` a NUL-terminated
 * string and `out_json` writable.
 */
RcStatus rc_check_generation(const RcContext *ctx,
                             const RcField *field,
                             int64_t level,
                             const char *descriptor,
                             char **out_json);

/**
 * Run a command-line invocation (without the program name) and return its
 * output. `out_exit` receives the process exit code the CLI would use.
 *
 * # Safety
 * `argv` must hold `argc` NUL-terminated strings; `out_text` and `out_exit`
 * must be writable.
 */
RcStatus rc_run_command(int argc, const char *const *argv, char **out_text, int *out_exit);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAYCLASS_H */
