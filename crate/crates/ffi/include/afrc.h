#ifndef AFRC_H
#define AFRC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AfrcStatus {
  AFRC_STATUS_OK = 0,
  AFRC_STATUS_NULL_POINTER = 1,
  AFRC_STATUS_INVALID_ARGUMENT = 2,
  AFRC_STATUS_PARSE = 3,
  AFRC_STATUS_IO = 4,
  /*
   The exact transport reference refused an edge above its degree guard.
   */
  AFRC_STATUS_CAPABILITY = 5,
  AFRC_STATUS_HYPOTHESIS = 6,
  /*
   The output buffer is shorter than required; nothing was written.
   */
  AFRC_STATUS_BUFFER_TOO_SMALL = 7,
  /*
   The curvature map belongs to a different graph state.
   */
  AFRC_STATUS_STALE = 8,
  AFRC_STATUS_INTERNAL = 9,
} AfrcStatus;

typedef enum AfrcCurvatureKind {
  AFRC_CURVATURE_KIND_AF3 = 0,
  AFRC_CURVATURE_KIND_AF4 = 1,
  AFRC_CURVATURE_KIND_ORC_REF = 2,
} AfrcCurvatureKind;

/*
 Opaque curvature map handle.
 */
typedef struct AfrcCurvatureMap AfrcCurvatureMap;

/*
 Opaque graph handle.
 */
typedef struct AfrcGraph AfrcGraph;

/*
 Rewiring settings. With `heuristic` set, `add` and `remove` are ignored
 and the budgets come from the curvature distribution. `iterations == 0`
 repeats until a round changes nothing.
 */
typedef struct AfrcRewireOptions {
  enum AfrcCurvatureKind kind;
  bool heuristic;
  size_t add;
  size_t remove;
  size_t iterations;
  uint64_t seed;
} AfrcRewireOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failing call on this thread, or null. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *afrc_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *afrc_version(void);

/*
 A graph with `node_count` nodes labelled `0..node_count` and no edges.
 */
struct AfrcGraph *afrc_graph_new(uint32_t node_count);

/*
 # Safety
 `graph` is null or a handle from this library not yet freed.
 */
void afrc_graph_free(struct AfrcGraph *graph);

/*
 Loads a whitespace-separated edge list.

 # Safety
 `path` is a NUL-terminated string; `out` is writable.
 */
enum AfrcStatus afrc_graph_load(const char *path, struct AfrcGraph **out);

/*
 Adds the undirected edge `(u, v)`. `added` (optional) receives whether
 the edge was new.

 # Safety
 `graph` is a live handle; `added` is null or writable.
 */
enum AfrcStatus afrc_graph_add_edge(struct AfrcGraph *graph, uint32_t u, uint32_t v, bool *added);

/*
 # Safety
 `graph` is null or a live handle.
 */
size_t afrc_graph_node_count(const struct AfrcGraph *graph);

/*
 # Safety
 `graph` is null or a live handle.
 */
size_t afrc_graph_edge_count(const struct AfrcGraph *graph);

/*
 Copies the canonical edge list (`us[i] < vs[i]`, sorted) into two
 arrays of length at least `capacity`.

 # Safety
 `us` and `vs` point to `capacity` writable elements.
 */
enum AfrcStatus afrc_graph_edges(const struct AfrcGraph *graph,
                                 uint32_t *us,
                                 uint32_t *vs,
                                 size_t capacity);

/*
 Curvature of every edge, in canonical edge order.

 # Safety
 `graph` is a live handle; `out` is writable.
 */
enum AfrcStatus afrc_curvature_compute(const struct AfrcGraph *graph,
                                       enum AfrcCurvatureKind kind,
                                       struct AfrcCurvatureMap **out);

/*
 # Safety
 `map` is null or a live handle.
 */
size_t afrc_curvature_map_len(const struct AfrcCurvatureMap *map);

/*
 Copies the values into `out`, which must hold `afrc_curvature_map_len`
 doubles. Fails with `AFRC_STATUS_STALE` when `graph` has changed since
 the map was computed.

 # Safety
 Handles are live; `out` points to `capacity` writable doubles.
 */
enum AfrcStatus afrc_curvature_map_values(const struct AfrcCurvatureMap *map,
                                          const struct AfrcGraph *graph,
                                          double *out,
                                          size_t capacity);

/*
 # Safety
 `map` is null or a handle from this library not yet freed.
 */
void afrc_curvature_map_free(struct AfrcCurvatureMap *map);

/*
 Rewires a copy of `graph`. On success `out_graph` receives a new handle
 and, when `out_report` is not null, a JSON report to release with
 [`afrc_string_free`].

 # Safety
 `graph` and `options` are valid; `out_graph` is writable; `out_report`
 is null or writable.
 */
enum AfrcStatus afrc_rewire(const struct AfrcGraph *graph,
                            const struct AfrcRewireOptions *options,
                            struct AfrcGraph **out_graph,
                            char **out_report);

/*
 # Safety
 `s` is null or a string returned by this library not yet freed.
 */
void afrc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AFRC_H */
