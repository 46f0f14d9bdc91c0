/* C interface to the cannings library: opaque handles, integer status
 * codes, thread-local error text. All matrices are dense and square over an
 * enumerated, labelled state space. */

#ifndef CANNINGS_CANNINGS_H
#define CANNINGS_CANNINGS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cn_scenario cn_scenario;
typedef struct cn_matrix cn_matrix;

enum cn_status {
    CN_OK = 0,
    CN_ERR_VALIDATION = 1, /* bad config, bad arguments, math domain */
    CN_ERR_CAP = 2         /* state space or population cap exceeded */
};

const char* cn_version(void);

/* message of the most recent failure on this thread */
const char* cn_last_error(void);

/* ---- scenarios ---- */

cn_scenario* cn_scenario_load_file(const char* path);
cn_scenario* cn_scenario_load_string(const char* text);
void cn_scenario_free(cn_scenario* scenario);

/* ---- exact matrices ---- */

cn_matrix* cn_forward_matrix(const cn_scenario* scenario);
cn_matrix* cn_backward_matrix_fixed(const cn_scenario* scenario);
cn_matrix* cn_backward_matrix_variable(const cn_scenario* scenario);

/* Q = Q_rep + Q_mut of the limiting coalescent for the configured sample */
cn_matrix* cn_limit_generator(const cn_scenario* scenario);

/* block counting generator truncated at `total_cap` blocks overall */
cn_matrix* cn_block_counting_generator(const cn_scenario* scenario, int total_cap);

cn_matrix* cn_matrix_exponential(const cn_matrix* generator, double t);

size_t cn_matrix_size(const cn_matrix* matrix);
double cn_matrix_get(const cn_matrix* matrix, size_t row, size_t col);
/* label string owned by the matrix; NULL when idx is out of range */
const char* cn_matrix_label(const cn_matrix* matrix, size_t idx);
void cn_matrix_free(cn_matrix* matrix);

/* ---- scalar kernels ---- */

/* kind: "wright_fisher" | "kimura" | "dirac" | "extreme_permutation";
 * c is the kimura parameter (ignored otherwise) */
int cn_phi(const char* kind, int population, int c, const int* counts, size_t num_counts, double* out);
int cn_coalescence_probability(const char* kind, int population, int c, double* out);

/* merger rate of the configured limit measure of one type; counts >= 1,
 * singleton groups handled by the consistency extension */
int cn_xi_rate(const cn_scenario* scenario, int type_index, const int* counts, size_t num_counts,
               double* out);

/* ---- orchestrated runs (CLI semantics) ---- */

typedef struct cn_run_options {
    const char* mode;   /* simulate: "forward" | "backward" | "gw"; NULL = model default */
    const char* n_grid; /* comma-separated N override, NULL = config */
    const char* t_grid; /* comma-separated t override, NULL = config */
    long long seed;
    int has_seed;
    long long replicates;
    int has_replicates;
    long long horizon;
    int has_horizon;
    long long cap;
    int has_cap;
} cn_run_options;

/* Runs a subcommand (exact-forward, exact-backward, exact-backward-variable,
 * simulate, limit-check, gw-limit, rates, block-gen), writing the CSV to
 * out_path and a manifest to out_path.manifest.json. Returns the exit code:
 * 0 ok, 1 validation error, 2 cap error. */
int cn_run(const char* subcommand, const char* config_path, const char* out_path,
           const cn_run_options* options);

#ifdef __cplusplus
}
#endif

#endif
