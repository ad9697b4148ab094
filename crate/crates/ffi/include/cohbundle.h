#ifndef COHBUNDLE_H
#define COHBUNDLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. `Mismatch` and `InputError` agree with the CLI exit codes.
typedef enum CbStatus {
  CB_STATUS_OK = 0,
  CB_STATUS_MISMATCH = 1,
  CB_STATUS_INPUT_ERROR = 2,
  CB_STATUS_NULL_POINTER = 3,
  CB_STATUS_INVALID_UTF8 = 4,
  CB_STATUS_INTERNAL = 5,
} CbStatus;

// A finite group.
typedef struct CbGroup CbGroup;

// A loaded and validated workspace.
typedef struct CbWorkspace CbWorkspace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a workspace document. `max_order` bounds accepted group orders.
//
// # Safety
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum CbStatus cb_workspace_from_json(const char *json,
                                     uintptr_t max_order,
                                     struct CbWorkspace **out);

// # Safety
// `ws` must come from [`cb_workspace_from_json`] and not be used afterwards.
void cb_workspace_free(struct CbWorkspace *ws);

// Runs a command line (without the program name, whitespace separated)
// against a loaded workspace, e.g. `"verify all --seed 3"`. The JSON report
// is stored in `out_report` even when the status is `Mismatch`.
//
// # Safety
// `ws` must be a live workspace handle, `command` a NUL-terminated string
// and `out_report` a valid pointer.
enum CbStatus cb_run(const struct CbWorkspace *ws, const char *command, char **out_report);

// Builds `Z_{d_1} x ... x Z_{d_k}`.
//
// # Safety
// `factors` must point to `len` values and `out` must be valid.
enum CbStatus cb_group_abelian(const uint64_t *factors, uintptr_t len, struct CbGroup **out);

// Order of a group, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live group handle.
uintptr_t cb_group_order(const struct CbGroup *g);

// # Safety
// `g` must come from [`cb_group_abelian`] and not be used afterwards.
void cb_group_free(struct CbGroup *g);

// `H^2(G, T)` as a JSON object with `invariants` and `order`.
//
// # Safety
// `g` must be a live group handle and `out_json` a valid pointer.
enum CbStatus cb_h2_circle(const struct CbGroup *g, char **out_json);

// # Safety
// `s` must be null or a string returned by this library.
void cb_string_free(char *s);

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call into this library on the same thread.
const char *cb_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COHBUNDLE_H */
