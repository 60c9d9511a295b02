#ifndef PERIODFORGE_H
#define PERIODFORGE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_UTF8 = 2,
  PF_STATUS_INVALID_GRAPH = 3,
  PF_STATUS_PARSE = 4,
  PF_STATUS_DIMENSION = 5,
  PF_STATUS_DIVERGENT = 6,
  PF_STATUS_NOT_PROJECTIVE = 7,
  PF_STATUS_OUT_OF_RANGE = 8,
  PF_STATUS_NUMERIC = 9,
  PF_STATUS_EXPRESSION = 10,
  PF_STATUS_NOT_POSITIVE_DEFINITE = 11,
  PF_STATUS_BUFFER_TOO_SMALL = 12,
  PF_STATUS_INTERNAL = 13,
} PfStatus;

/**
 * Opaque quadratic form handle.
 */
typedef struct PfForm PfForm;

/**
 * Opaque graph handle.
 */
typedef struct PfGraph PfGraph;

/**
 * Monte Carlo estimate.
 */
typedef struct PfEstimate {
  double mean;
  double stderr;
  uint64_t samples;
  uint64_t seed;
} PfEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pf_version(void);

/**
 * Copies the last error message of this thread into `buf`. The message is
 * kept, so a sizing call with a null buffer can be followed by a real one.
 */
enum PfStatus pf_last_error(char *buf, size_t len, size_t *needed);

/**
 * Parses a graph in the `v`/`e` line format.
 */
enum PfStatus pf_graph_parse(const char *text, struct PfGraph **out);

/**
 * Builds a named graph such as `wheel3`, `zigzag5` or `sunrise`.
 */
enum PfStatus pf_graph_named(const char *name, struct PfGraph **out);

/**
 * Releases a graph handle; null is ignored.
 */
void pf_graph_free(struct PfGraph *g);

enum PfStatus pf_graph_num_edges(const struct PfGraph *g, size_t *out);

enum PfStatus pf_graph_num_vertices(const struct PfGraph *g, size_t *out);

enum PfStatus pf_graph_loop_number(const struct PfGraph *g, size_t *out);

/**
 * Writes the graph polynomial as text, e.g. `x1*x2 + x1*x3 + x2*x3`.
 */
enum PfStatus pf_graph_polynomial(const struct PfGraph *g, char *buf, size_t len, size_t *needed);

/**
 * Monte Carlo estimate of the Feynman residue.
 */
enum PfStatus pf_residue(const struct PfGraph *g,
                         uint64_t samples,
                         uint64_t seed,
                         struct PfEstimate *out);

/**
 * Monte Carlo estimate of a canonical integral; `form` lists the degrees,
 * e.g. `"5"` or `"5,9"`.
 */
enum PfStatus pf_canonical_integral(const struct PfGraph *g,
                                    const char *form,
                                    uint64_t samples,
                                    uint64_t seed,
                                    struct PfEstimate *out);

/**
 * `zeta(s)` for `s >= 2`.
 */
enum PfStatus pf_zeta(uint32_t s, double *out);

/**
 * Evaluates a target expression such as `"441/8*zeta(7)"`.
 */
enum PfStatus pf_target_value(const char *expr, double *out);

/**
 * Dimension of graph complex homology at `loops` and degree
 * `edges - 2 loops`.
 */
enum PfStatus pf_gc_homology_dim(size_t loops, int64_t degree, size_t *out);

/**
 * Parses a quadratic form: the dimension followed by the entries.
 */
enum PfStatus pf_form_parse(const char *text, struct PfForm **out);

/**
 * Releases a form handle; null is ignored.
 */
void pf_form_free(struct PfForm *q);

/**
 * Writes the minimal vectors row by row into `buf` (`count * dim`
 * integers). `count` receives the number of vectors even when `buf` is too
 * small.
 */
enum PfStatus pf_form_minimal_vectors(const struct PfForm *q,
                                      int64_t *buf,
                                      size_t cap,
                                      size_t *count);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERIODFORGE_H */
