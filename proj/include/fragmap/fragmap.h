#ifndef FRAGMAP_H
#define FRAGMAP_H

/* C interface of the fragmap solver library: find minimum-cost mappings
 * of a connected part of a fragmented query molecule onto a fragmented
 * target molecule. Instances and solution sets are opaque handles; every
 * fallible call returns a status code and leaves a message readable
 * through fragmap_last_error() on failure. Handles are not thread-safe
 * individually, but distinct handles may be used from distinct threads.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct fragmap_instance fragmap_instance;
typedef struct fragmap_solutions fragmap_solutions;

typedef enum fragmap_status {
    FRAGMAP_OK = 0,
    FRAGMAP_ERR_IO = 1,      /* file could not be read or written */
    FRAGMAP_ERR_PARSE = 2,   /* malformed file */
    FRAGMAP_ERR_INVALID = 3, /* invariant violation or bad argument */
    FRAGMAP_ERR_INTERNAL = 4
} fragmap_status;

typedef enum fragmap_outcome {
    FRAGMAP_PROVEN_OPTIMAL = 0,
    FRAGMAP_PROVEN_INFEASIBLE = 1,
    FRAGMAP_LIMIT_REACHED = 2
} fragmap_outcome;

/* Message describing the most recent failure in the calling thread. */
const char* fragmap_last_error(void);
int fragmap_abi_version(void);

/* --- instances --------------------------------------------------------- */

fragmap_status fragmap_instance_load(const char* path, fragmap_instance** out);
fragmap_status fragmap_instance_save(const fragmap_instance* inst, const char* path);

/* Deterministic random instance: uniform labeled trees, scores uniform in
 * [1, score_max]. The same seed always yields the same instance. */
fragmap_status fragmap_instance_generate(int n_query, int n_target, int score_max, int delta,
                                         uint64_t seed, fragmap_instance** out);

/* Builds an instance from two histogram files (JSON lists of
 * {"id", "bins"} records) and edge lists written as "0-1,1-2,...". An
 * empty edge string is valid for single-fragment molecules. */
fragmap_status fragmap_instance_from_histograms(const char* query_hist_path,
                                                const char* target_hist_path,
                                                const char* query_edges, const char* target_edges,
                                                int delta, fragmap_instance** out);

void fragmap_instance_free(fragmap_instance* inst);

int fragmap_instance_query_size(const fragmap_instance* inst);
int fragmap_instance_target_size(const fragmap_instance* inst); /* real fragments */
int fragmap_instance_delta(const fragmap_instance* inst);
int fragmap_instance_default_nlink(const fragmap_instance* inst); /* 0 if unset */
/* Score of (query fragment, real target fragment); -1 on bad indices. */
int fragmap_instance_score(const fragmap_instance* inst, int query, int target);

/* --- solving ------------------------------------------------------------ */

typedef struct fragmap_options {
    int nlink;               /* 0: use the instance's stored default */
    int64_t time_limit_ms;   /* <= 0: unlimited */
    int64_t backtrack_limit; /* <= 0: unlimited */
    int strong_alldiff;      /* nonzero: matching-based distinctness filtering */
    const int* fixed;        /* 2*fixed_count ints: query, target (-1 = dummy) */
    int fixed_count;
} fragmap_options;

void fragmap_options_init(fragmap_options* opts);

/* Minimum-cost mapping; on success the solution set holds 0 (proven
 * infeasible) or 1 entry. With a limit hit the entry, if present, is the
 * best incumbent. */
fragmap_status fragmap_solve(const fragmap_instance* inst, const fragmap_options* opts,
                             fragmap_solutions** out);

/* Every distinct optimal mapping. */
fragmap_status fragmap_solve_all_optimal(const fragmap_instance* inst,
                                         const fragmap_options* opts, fragmap_solutions** out);

/* Up to k maximally-diverse solutions within a cost gap of the optimum.
 * gap_percent >= 0 selects a relative gap of floor(opt * pct / 100);
 * otherwise gap_absolute is used. */
fragmap_status fragmap_diverse(const fragmap_instance* inst, const fragmap_options* opts, int k,
                               long gap_absolute, int gap_percent, int widen_distance_cap,
                               fragmap_solutions** out);

/* Exhaustive reference solver (small queries only): all feasible
 * mappings, and the greedy diverse replay. */
fragmap_status fragmap_oracle_feasible_set(const fragmap_instance* inst, int nlink,
                                           fragmap_solutions** out);
fragmap_status fragmap_oracle_diverse(const fragmap_instance* inst, int nlink, int k, long gap,
                                      fragmap_solutions** out);

void fragmap_solutions_free(fragmap_solutions* sols);

/* --- run-level results --------------------------------------------------- */

fragmap_outcome fragmap_solutions_outcome(const fragmap_solutions* sols);
int fragmap_solutions_count(const fragmap_solutions* sols);
int64_t fragmap_solutions_backtracks(const fragmap_solutions* sols);
int64_t fragmap_solutions_nodes(const fragmap_solutions* sols);
double fragmap_solutions_time_ms(const fragmap_solutions* sols);

/* --- per-solution accessors (idx in [0, count)) --------------------------- */

long fragmap_solutions_cost(const fragmap_solutions* sols, int idx);
/* Fills buf (length >= query size) with file target indices, -1 = unmapped. */
fragmap_status fragmap_solutions_mapping(const fragmap_solutions* sols, int idx, int* buf,
                                         int buf_len);
/* Accumulated-distance value achieved by a diverse iteration; -1 otherwise. */
long fragmap_solutions_distance(const fragmap_solutions* sols, int idx);
int fragmap_solutions_hamming_to_first(const fragmap_solutions* sols, int idx);
int fragmap_solutions_is_duplicate(const fragmap_solutions* sols, int idx);

#ifdef __cplusplus
}
#endif

#endif /* FRAGMAP_H */
