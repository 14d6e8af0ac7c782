/* C interface to the nbpa core library.
 *
 * All entry points return an error code; NBPA_OK means success. On failure
 * nbpa_last_error() returns a thread-local message describing the problem.
 * Strings handed out through char** are heap allocated and must be released
 * with nbpa_string_free; pmf handles with nbpa_pmf_free.
 */
#ifndef NBPA_H
#define NBPA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    NBPA_OK = 0,
    NBPA_ERR_DOMAIN = 1,   /* invalid parameter values */
    NBPA_ERR_USAGE = 2,    /* malformed request (bad mode/format strings, null args) */
    NBPA_ERR_INTERNAL = 3  /* unexpected failure */
};

/* Message from the most recent failing call on this thread; empty string if
 * none. The pointer stays valid until the next failing call. */
const char* nbpa_last_error(void);

void nbpa_string_free(char* s);

/* ---- pmf handles ---------------------------------------------------- */

typedef struct nbpa_pmf nbpa_pmf;

/* kmax < 0 requests adaptive truncation (tail below 1e-10). */
int nbpa_nb_pmf(double r, double p, int64_t kmax, nbpa_pmf** out);
int nbpa_k_pmf(int m, double delta, int64_t kmax, nbpa_pmf** out);

int64_t nbpa_pmf_len(const nbpa_pmf* pmf);
double nbpa_pmf_prob(const nbpa_pmf* pmf, int64_t k); /* 0 outside the support */
double nbpa_pmf_tail(const nbpa_pmf* pmf);
void nbpa_pmf_free(nbpa_pmf* pmf);

/* ---- scalar queries -------------------------------------------------- */

/* kmax < 0 requests adaptive truncation. */
int nbpa_fixed_point_residual(double r, double p, int64_t kmax, double* out);

int nbpa_expected_in_degree(int64_t n, int64_t i, int m, double delta, double* out);

/* ---- report runners -------------------------------------------------- */
/* Each writes a complete UTF-8 document (CSV or JSON) to *out. */

/* dist is "nb" or "k"; format is "csv" or "json". For "nb" pass r/p, for
 * "k" pass m/delta (the other pair is ignored). kmax < 0 means adaptive. */
int nbpa_run_pmf(const char* dist, double r, double p, int m, double delta, int64_t kmax,
                 const char* format, char** out);

int nbpa_run_simulate(int64_t n, int m, double delta, int64_t graphs, uint64_t seed, char** out);

/* mode is "exact" or "mc"; format is "csv" or "json". */
int nbpa_run_converge(const int64_t* n_values, int64_t n_count, int m, double delta,
                      const char* mode, int64_t graphs, uint64_t seed, const char* format,
                      char** out);

/* JSON lines, one object per random set. *all_pass reports certification.
 * kmax < 0 selects the adaptive truncation. */
int nbpa_run_stein_check(double r, double p, int64_t kmax, int64_t set_count, uint64_t set_seed,
                         int* all_pass, char** out);

/* *pass reports residual < 1e-6. */
int nbpa_run_fixedpoint(double r, double p, int64_t kmax, int* pass, char** out);

int nbpa_run_coupling(int64_t n, int64_t i, int m, double delta, int64_t replicas, uint64_t seed,
                      char** out);

int nbpa_run_theorem31(int64_t n, const int64_t* i_list, int64_t i_count, int m, double delta,
                       int64_t replicas, uint64_t seed, char** out);

#ifdef __cplusplus
}
#endif

#endif
