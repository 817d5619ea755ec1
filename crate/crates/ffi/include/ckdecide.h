#ifndef CKDECIDE_H
#define CKDECIDE_H

/* Generated by cbindgen from src/lib.rs; edits are overwritten. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CkStatus {
  CK_STATUS_OK = 0,
  CK_STATUS_NULL_ARGUMENT = 1,
  CK_STATUS_INVALID_UTF8 = 2,
  CK_STATUS_UNKNOWN_FORMAT = 3,
  CK_STATUS_PARSE_ERROR = 4,
  CK_STATUS_UNKNOWN_CHECK = 5,
  // No requested check applies to this kind of input. The report is
  // still produced.
  CK_STATUS_UNSUPPORTED = 6,
  // The report did not verify, or is malformed.
  CK_STATUS_VERIFY_FAILED = 7,
  CK_STATUS_INTERNAL = 8,
} CkStatus;

// A parsed input graph.
typedef struct CkGraph CkGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread; empty if none. Valid until
// the next call into the library from the same thread.
const char *ck_last_error(void);

// Library version, static storage.
const char *ck_version(void);

// Parses `text` as `format` ("edgelist", "matrix" or "periodic").
//
// # Safety
// `text` and `format` are NUL-terminated strings; `out` is writable.
enum CkStatus ck_graph_parse(const char *text, const char *format, struct CkGraph **out);

// # Safety
// `g` is null or a handle from `ck_graph_parse` not yet freed.
void ck_graph_free(struct CkGraph *g);

// Runs the comma-separated `checks` ("all" for every check) and writes the
// JSON report to `out_json`. `depth` 0 picks the default exploration depth.
//
// # Safety
// `g` is a live handle, `checks` a NUL-terminated string, `out_json`
// writable.
enum CkStatus ck_analyze_json(const struct CkGraph *g,
                              const char *checks,
                              uint32_t depth,
                              char **out_json);

// Graphviz text; `copies` bounds periodic inputs (0 for the default).
//
// # Safety
// `g` is a live handle and `out_dot` writable.
enum CkStatus ck_export_dot(const struct CkGraph *g, uint32_t copies, char **out_dot);

// Re-checks every certificate of a JSON report. `CK_STATUS_OK` means all
// verified.
//
// # Safety
// `json` is a NUL-terminated string.
enum CkStatus ck_verify_json(const char *json);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void ck_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CKDECIDE_H */
