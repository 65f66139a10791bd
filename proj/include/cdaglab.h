/* cdaglab — computation-DAG construction and exact compositional-complexity
 * analysis for sequence-model architectures.
 *
 * C interface to the shared library. All functions return a status code;
 * results come back as opaque graph handles or heap-allocated UTF-8 strings.
 * Strings returned through `char **` outputs are owned by the caller and
 * must be released with cdaglab_string_free; graphs with cdaglab_graph_free.
 * On error, *err (when present) receives a message, also caller-owned.
 *
 * Thread safety: graph handles are immutable after creation; any number of
 * threads may run analyses on the same handle concurrently.
 */
#ifndef CDAGLAB_H
#define CDAGLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cdaglab_graph cdaglab_graph;

typedef enum cdaglab_status {
    CDAGLAB_OK = 0,
    CDAGLAB_ERR_PARSE = 1,      /* malformed input: JSON, flags, tree spec   */
    CDAGLAB_ERR_INVALID = 2,    /* graph violates a structural invariant     */
    CDAGLAB_ERR_BUDGET = 3,     /* enumeration exceeded its path budget      */
    CDAGLAB_ERR_FAILURE = 4,    /* any other failure                         */
} cdaglab_status;

const char *cdaglab_version(void);

void cdaglab_string_free(char *s);
void cdaglab_graph_free(cdaglab_graph *g);

/* Builds a graph from an architecture spec, e.g.
 * {"family":"transformer","len":7,"blocks":2}. Named reference graphs are
 * addressed by {"family":"example1"} / {"family":"example2"}. */
cdaglab_status cdaglab_build(const char *arch_json, cdaglab_graph **out, char **err);

cdaglab_status cdaglab_graph_from_json(const char *json, cdaglab_graph **out, char **err);
cdaglab_status cdaglab_graph_to_json(const cdaglab_graph *g, char **out);
/* options_json: {"rankdir":"LR","fill":true,"show_arg_pos":false} or NULL. */
cdaglab_status cdaglab_graph_to_dot(const cdaglab_graph *g, const char *options_json, char **out,
                                    char **err);

/* JSON array of violation strings; empty array means valid. */
cdaglab_status cdaglab_graph_validate(const cdaglab_graph *g, char **violations_json);

cdaglab_status cdaglab_graph_stats(const cdaglab_graph *g, int *k, int *q, int *m, int *depth,
                                   char **err);

cdaglab_status cdaglab_graph_equal(const cdaglab_graph *a, const cdaglab_graph *b, int *out);
cdaglab_status cdaglab_graph_isomorphic(const cdaglab_graph *a, const cdaglab_graph *b, int *out,
                                        char **err);

/* Exact influence profile at rational c ("2", "3/2").
 * format: "json", "table" or "csv"; symbolic adds the delta polynomials. */
cdaglab_status cdaglab_analyze(const cdaglab_graph *g, const char *c, const char *format,
                               int symbolic, char **out, char **err);

/* Enumerated vs published complexity. len_range may be NULL (use the spec's
 * length), a single length ("6") or an inclusive sweep ("4..12"); rows come
 * out in length order. Format as above. */
cdaglab_status cdaglab_compare(const char *arch_json, const char *len_range, const char *c,
                               const char *format, char **out, char **err);

/* Perturbation experiment. experiment_json:
 * {"arch": {...}, "c": "2", "trials": 10000, "seed": 7, "dim": 16,
 *  "gamma": 1.0, "span_kind": "linearmean"|"tanhlinear"|"paddedfixedarity",
 *  "vocab": 16, "diagnostic_changed_graphs": false}
 * summary_json gets the totals; csv_log (optional, may be NULL) the trials. */
cdaglab_status cdaglab_perturb(const char *experiment_json, char **summary_json, char **csv_log,
                               char **err);

/* Cleanly-separable decompositions of one graph ("json" or "table"). */
cdaglab_status cdaglab_parts(const cdaglab_graph *g, const char *format, char **out, char **err);

/* Coverage of dataset item 0 by the remaining items. */
cdaglab_status cdaglab_coverage(const char *dataset_json, char **report_json, char **err);

/* Runs the verification suite. Returns CDAGLAB_OK with *failures = 0 when
 * everything passes; *failures counts failed criteria otherwise.
 * format: "text" or "json". threads: 0 = auto. */
cdaglab_status cdaglab_suite(const char *format, int threads, char **out, int *failures);

#ifdef __cplusplus
}
#endif

#endif /* CDAGLAB_H */
