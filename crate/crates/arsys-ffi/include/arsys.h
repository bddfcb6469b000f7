#ifndef ARSYS_H
#define ARSYS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome; mirrors the CLI exit codes.
 */
typedef enum ArsysStatus {
  /**
   * Success / finite / match found.
   */
  ArsysOk = 0,
  /**
   * Negative verdict: not i-finite, limits exceeded, or no match.
   */
  ArsysNegative = 1,
  /**
   * Invalid argument or unparsable input.
   */
  ArsysInvalid = 2,
  /**
   * Internal invariant violation.
   */
  ArsysInternal = 3,
} ArsysStatus;

/**
 * Opaque semi-Cartan graph handle.
 */
typedef struct ArsysGraph ArsysGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. The pointer stays
 * valid until the next library call on the same thread; do not free it.
 */
const char *arsys_last_error(void);

/**
 * Frees a string returned through an out-parameter.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library and not yet
 * freed, or null.
 */
void arsys_string_free(char *s);

/**
 * Parses an input document and builds its semi-Cartan graph.
 * `max_points = 0` selects the default cap.
 *
 * # Safety
 * `input_text` must be a NUL-terminated string or null; `out` must point
 * to writable memory for one pointer.
 */
enum ArsysStatus arsys_graph_build(const char *input_text,
                                   uintptr_t max_points,
                                   struct ArsysGraph **out);

/**
 * Frees a graph handle.
 *
 * # Safety
 * `g` must come from [`arsys_graph_build`] and not be freed twice; null is
 * ignored.
 */
void arsys_graph_free(struct ArsysGraph *g);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `g` must be a live handle or null.
 */
uintptr_t arsys_graph_point_count(const struct ArsysGraph *g);

/**
 * JSON rendering of the graph (points, diagrams, Cartan matrices,
 * neighbors).
 *
 * # Safety
 * `g` must be a live handle; `out` must point to writable memory for one
 * pointer.
 */
enum ArsysStatus arsys_graph_json(const struct ArsysGraph *g, char **out);

/**
 * DOT rendering of the exchange graph.
 *
 * # Safety
 * Same contract as [`arsys_graph_json`].
 */
enum ArsysStatus arsys_graph_dot(const struct ArsysGraph *g, char **out);

/**
 * Enumerates real roots; writes the verdict JSON and returns `ArsysOk` for
 * a finite system, `ArsysNegative` otherwise. `max_roots = 0` selects the
 * default cap.
 *
 * # Safety
 * Same contract as [`arsys_graph_json`].
 */
enum ArsysStatus arsys_roots_json(const struct ArsysGraph *g, uintptr_t max_roots, char **out);

/**
 * Matches an input document against the built-in rank-4 classification;
 * writes the match-list JSON and returns `ArsysNegative` when nothing
 * matches.
 *
 * # Safety
 * `input_text` must be a NUL-terminated string or null; `out` must point
 * to writable memory for one pointer.
 */
enum ArsysStatus arsys_classify_json(const char *input_text, char **out);

/**
 * Re-verifies every built-in table row under its canonical assignments and
 * writes the per-row report JSON; `ArsysNegative` if any row fails.
 *
 * # Safety
 * `out` must point to writable memory for one pointer.
 */
enum ArsysStatus arsys_verify_tables_json(char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARSYS_H */
