#ifndef DIAMDET_H
#define DIAMDET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define DIAMDET_NONE UINT64_MAX

#define DIAMDET_NO_VERTEX UINT32_MAX

typedef enum DiamdetStatus {
  DIAMDET_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  DIAMDET_STATUS_NULL = 1,
  /**
   * Malformed graph text.
   */
  DIAMDET_STATUS_PARSE = 2,
  /**
   * The estimator cannot run on this graph (directedness, weights,
   * connectivity, oracle size cap).
   */
  DIAMDET_STATUS_PRECONDITION = 3,
  DIAMDET_STATUS_INVALID_ARGUMENT = 4,
  DIAMDET_STATUS_IO = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  DIAMDET_STATUS_PANIC = 6,
  /**
   * The caller's buffer is shorter than the number of vertices.
   */
  DIAMDET_STATUS_BUFFER_TOO_SMALL = 7,
} DiamdetStatus;

typedef enum DiamdetAlgo {
  DIAMDET_ALGO_CGR = 0,
  DIAMDET_ALGO_THREE_HALVES = 1,
  DIAMDET_ALGO_FIVE_THIRDS = 2,
  DIAMDET_ALGO_RADIUS_ECC = 3,
  DIAMDET_ALGO_EXACT = 4,
} DiamdetAlgo;

typedef enum DiamdetFormat {
  /**
   * `n m directed|undirected` header, then `u v [w]` lines.
   */
  DIAMDET_FORMAT_CANONICAL = 0,
  /**
   * DIMACS `.gr` (directed, 1-indexed).
   */
  DIAMDET_FORMAT_DIMACS_GR = 1,
} DiamdetFormat;

/**
 * Opaque graph handle.
 */
typedef struct DiamdetGraph DiamdetGraph;

/**
 * Estimator parameters. Zero in any field selects the default.
 */
typedef struct DiamdetParams {
  uint32_t k;
  uint32_t q;
  uint32_t ell;
  uint32_t big_l;
  uint32_t oracle_cap;
} DiamdetParams;

/**
 * Summary of one run. Fields an algorithm does not produce are set to
 * `DIAMDET_NONE` (64-bit) or `DIAMDET_NO_VERTEX` (32-bit).
 */
typedef struct DiamdetEstimate {
  /**
   * Diameter estimate, or the exact diameter for `DIAMDET_ALGO_EXACT`.
   */
  uint64_t diameter;
  uint32_t witness_u;
  uint32_t witness_v;
  /**
   * Radius estimate (radius-ecc) or exact radius (exact).
   */
  uint64_t radius;
  uint32_t center;
  uint64_t searches;
} DiamdetEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses graph text. `format` is a `DiamdetFormat` value.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DiamdetStatus diamdet_graph_parse(const char *text, int32_t format, struct DiamdetGraph **out);

/**
 * Reads a graph file. `format` is a `DiamdetFormat` value.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DiamdetStatus diamdet_graph_load_file(const char *path,
                                           int32_t format,
                                           struct DiamdetGraph **out);

/**
 * Generates a graph from a spec such as `gnm:n=50,m=200,w=10:7`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum DiamdetStatus diamdet_graph_generate(const char *spec, struct DiamdetGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `graph` must come from a `diamdet_graph_*` constructor and not be used
 * afterwards.
 */
void diamdet_graph_free(struct DiamdetGraph *graph);

/**
 * Number of vertices, 0 for null.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t diamdet_graph_n(const struct DiamdetGraph *graph);

/**
 * Number of edges, 0 for null.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
size_t diamdet_graph_m(const struct DiamdetGraph *graph);

/**
 * # Safety
 * `graph` must be null or a live handle.
 */
bool diamdet_graph_is_directed(const struct DiamdetGraph *graph);

/**
 * Runs an estimator and fills `out`. `algo` is a `DiamdetAlgo` value;
 * `params` may be null for defaults.
 *
 * # Safety
 * `graph` must be a live handle, `params` null or valid, `out` valid.
 */
enum DiamdetStatus diamdet_estimate(const struct DiamdetGraph *graph,
                                    int32_t algo,
                                    const struct DiamdetParams *params,
                                    struct DiamdetEstimate *out);

/**
 * Runs an estimator and returns its full JSON report in `*out`. Release
 * the string with [`diamdet_string_free`].
 *
 * # Safety
 * As [`diamdet_estimate`]; `out` must be a valid pointer.
 */
enum DiamdetStatus diamdet_report_json(const struct DiamdetGraph *graph,
                                       int32_t algo,
                                       const struct DiamdetParams *params,
                                       char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from [`diamdet_report_json`] and not be used afterwards.
 */
void diamdet_string_free(char *s);

/**
 * Eccentricity estimates of every vertex from the CGR sweep with the given
 * `k` (0 for the default). `buf` must hold at least `n` entries.
 *
 * # Safety
 * `graph` must be a live handle and `buf` valid for `len` writes.
 */
enum DiamdetStatus diamdet_eccentricities(const struct DiamdetGraph *graph,
                                          uint32_t k,
                                          uint64_t *buf,
                                          size_t len);

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call into this library on the thread.
 */
const char *diamdet_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *diamdet_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIAMDET_H */
