#ifndef LATTICEFORGE_H
#define LATTICEFORGE_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LfStatus {
  LF_STATUS_OK = 0,
  LF_STATUS_NULL_ARGUMENT = 1,
  LF_STATUS_INVALID_UTF8 = 2,
  LF_STATUS_PARSE = 3,
  LF_STATUS_INVALID = 4,
  LF_STATUS_NOT_FOUND = 5,
  LF_STATUS_UNBOUND_THETA = 6,
  LF_STATUS_IO = 7,
  LF_STATUS_PANIC = 8,
} LfStatus;

typedef struct LfGraph LfGraph;

typedef struct LfGrid LfGrid;

typedef struct LfLattice LfLattice;

typedef struct LfMetrics {
  uint32_t rows;
  uint32_t max_col;
  size_t qubit_count;
  size_t t_count;
} LfMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Owned by the
 * library and valid until the next call on the same thread.
 */
const char *lf_last_error(void);

/**
 * Library version as a static string.
 */
const char *lf_version(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed. Null is a no-op.
 */
void lf_string_free(char *s);

/**
 * Parses algorithm JSON into a new grid.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LfStatus lf_grid_from_json(const char *json, struct LfGrid **out);

/**
 * # Safety
 * `grid` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_grid_to_json(const struct LfGrid *grid, char **out);

/**
 * Diagnostics as a JSON array; empty means the grid is valid.
 *
 * # Safety
 * `grid` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_grid_diagnostics(const struct LfGrid *grid, char **out);

/**
 * # Safety
 * `grid` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_grid_metrics(const struct LfGrid *grid, struct LfMetrics *out);

/**
 * Emits OpenQASM 3.0. `bindings_json` is a JSON array of
 * `{"kind","row","col","theta"}` objects, or null for none.
 *
 * # Safety
 * `grid` must be a live handle; `bindings_json` null or NUL-terminated;
 * `out` must be writable.
 */
enum LfStatus lf_compile(const struct LfGrid *grid, const char *bindings_json, char **out);

/**
 * # Safety
 * `grid` must come from this library and not have been freed. Null is a no-op.
 */
void lf_grid_free(struct LfGrid *grid);

/**
 * Expands and prepares a valid grid.
 *
 * # Safety
 * `grid` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_layout(const struct LfGrid *grid, struct LfLattice **out);

/**
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_lattice_to_json(const struct LfLattice *lattice, char **out);

/**
 * Copies the lattice's graph into a new handle.
 *
 * # Safety
 * `lattice` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_lattice_graph(const struct LfLattice *lattice, struct LfGraph **out);

/**
 * # Safety
 * `lattice` must come from this library and not have been freed. Null is a no-op.
 */
void lf_lattice_free(struct LfLattice *lattice);

/**
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum LfStatus lf_graph_from_json(const char *json, struct LfGraph **out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_graph_to_json(const struct LfGraph *graph, char **out);

/**
 * # Safety
 * `graph` must be a live handle; the outputs must be writable.
 */
enum LfStatus lf_graph_size(const struct LfGraph *graph, size_t *vertices, size_t *edges);

/**
 * Pauli measurement of `vertex`. `basis` is `X`, `Y`, `Z`, optionally
 * signed (`-X`). A negative `b0` picks the default neighbour for `X`.
 *
 * # Safety
 * `graph` must be a live handle; `basis` NUL-terminated; `out` writable.
 */
enum LfStatus lf_graph_measure(const struct LfGraph *graph,
                               uint32_t vertex,
                               const char *basis,
                               int64_t b0,
                               struct LfGraph **out);

/**
 * # Safety
 * `graph` must be a live handle; `out` must be writable.
 */
enum LfStatus lf_graph_local_complement(const struct LfGraph *graph,
                                        uint32_t vertex,
                                        struct LfGraph **out);

/**
 * Fewest-edge member of the local-complementation orbit found within
 * `budget` graphs. `exhaustive` reports whether the whole orbit was seen.
 *
 * # Safety
 * `graph` must be a live handle; the outputs must be writable.
 */
enum LfStatus lf_graph_minimize_cz(const struct LfGraph *graph,
                                   size_t budget,
                                   struct LfGraph **out,
                                   bool *exhaustive);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum LfStatus lf_graph_lc_equivalent(const struct LfGraph *a, const struct LfGraph *b, bool *out);

/**
 * # Safety
 * `graph` must come from this library and not have been freed. Null is a no-op.
 */
void lf_graph_free(struct LfGraph *graph);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATTICEFORGE_H */
