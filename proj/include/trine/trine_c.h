/*
 * Copyright 2026 The trine-estimators Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libtrine.
 *
 * Every fallible call returns a trine_status; on failure the message is
 * available from trine_last_error() on the calling thread until the next
 * call from that thread. Objects are opaque handles released by their
 * *_destroy function (NULL is accepted). Strings returned through char**
 * belong to the caller and are released with trine_string_free.
 */

#ifndef TRINE_C_H
#define TRINE_C_H

#include <stddef.h>
#include <stdint.h>

#if defined(TRINE_BUILDING_LIBRARY)
#define TRINE_API __attribute__((visibility("default")))
#else
#define TRINE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trine_status {
    TRINE_OK = 0,
    TRINE_E_INVALID_ARGUMENT = 1,
    TRINE_E_RANGE = 2,
    TRINE_E_CONVERGENCE = 3,
    TRINE_E_CAPACITY = 4,
    TRINE_E_CONSISTENCY = 5,
    TRINE_E_IO = 6,
    TRINE_E_UNSUPPORTED = 7,
    TRINE_E_INTERNAL = 99
} trine_status;

typedef enum trine_kind {
    TRINE_MEAN_TRINE = 0,
    TRINE_CLASSICAL_MINIMAX = 1,
    TRINE_CORRECTED_MINIMAX = 2,
    TRINE_ML_TRINE = 3,
    TRINE_MEAN_DET_WEIGHT = 4,
    /* Reports the true state; accepted by the risk and simulation calls. */
    TRINE_ORACLE = 5
} trine_kind;

typedef enum trine_moment_path {
    /* Recurrence, shift identity or interpolation, as appropriate. */
    TRINE_MOMENT_DEFAULT = 0,
    /* Direct quadrature of the p-product weight. */
    TRINE_MOMENT_QUADRATURE = 1,
    /* Direct quadrature of the det(rho) weight. */
    TRINE_MOMENT_DET_QUADRATURE = 2
} trine_moment_path;

typedef struct trine_engine trine_engine;
typedef struct trine_profile trine_profile;
typedef struct trine_search trine_search;
typedef struct trine_sim trine_sim;

typedef struct trine_estimator_spec {
    int kind; /* trine_kind */
    double beta;
    double lambda;
    double ml_tol;
} trine_estimator_spec;

typedef struct trine_grid {
    int radial;
    int angular;
    int refine_levels;
    int refine_factor;
    int refine_half_width;
    int die_mode;
    int die_divisions;
} trine_grid;

typedef struct trine_profile_summary {
    int N;
    double parameter;
    double max_mse;
    double argmax_r;
    double argmax_phi;
    double argmax_p[3];
    double min_mse;
    double argmin_r;
    double argmin_phi;
    double argmin_p[3];
    double coarse_max;
    double coarse_min;
    size_t nodes;
    size_t evaluations;
} trine_profile_summary;

typedef struct trine_search_summary {
    int N;
    int kind;
    double optimum;
    double value;
    double min_mse;
    double argmax_r;
    double argmax_phi;
    double argmin_r;
    double argmin_phi;
    double flat_low;
    double flat_high;
    size_t samples;
    int golden_iterations;
    int local_minima;
    int converged;
    int at_lower_edge;
} trine_search_summary;

typedef struct trine_sim_config {
    double r;
    double phi;
    int N;
    int64_t trials;
    uint64_t seed;
    int workers;
    int keep_trials;
} trine_sim_config;

typedef struct trine_sim_summary {
    double mean;
    double std_error; /* NaN for a single trial */
    double exact_mse;
    int64_t trials;
} trine_sim_summary;

/* --- library ----------------------------------------------------------- */
TRINE_API const char *trine_version(void);
TRINE_API const char *trine_last_error(void);
TRINE_API const char *trine_status_name(int status);
TRINE_API void trine_string_free(char *s);
/* Worker count from TRINE_WORKERS or the hardware. */
TRINE_API trine_status trine_default_workers(int *out);

/* --- moments ------------------------------------------------------------- */
/* quad_tol <= 0 and quad_max_level <= 0 select the defaults (1e-10, 9). */
TRINE_API trine_status trine_engine_create(double quad_tol, int quad_max_level, trine_engine **out);
TRINE_API void trine_engine_destroy(trine_engine *engine);

TRINE_API trine_status trine_moment(trine_engine *engine, double beta, const int counts[3],
                                    int path, double *out);
TRINE_API trine_status trine_log_moment(trine_engine *engine, double beta, const int counts[3],
                                        int path, double *out);
/* Exact M_beta for integer beta >= 1 as "num/den". */
TRINE_API trine_status trine_moment_exact(int beta, const int counts[3], char **out);
/* Exact surface moment L as "num/den". */
TRINE_API trine_status trine_surface_moment_exact(const int counts[3], char **out);
/* kind: M_n00, L_n00, L_n10, L_n20, L_nnn. */
TRINE_API trine_status trine_special_closed_form(const char *kind, int n, char **out);
/* 2 prod Gamma(n_k + beta) / Gamma(N + K beta). */
TRINE_API trine_status trine_classical_moment(double beta, const int *counts, size_t K, double *out);
/* Writes the exact table up to n_max in the versioned text format. */
TRINE_API trine_status trine_dump_table(int n_max, const char *path);
/* Exhaustive exact sum-rule and recurrence-agreement checks up to n_max. */
TRINE_API trine_status trine_verify_table(int n_max, size_t *checks, size_t *failures);

/* --- estimators ---------------------------------------------------------- */
TRINE_API void trine_estimator_spec_default(trine_estimator_spec *spec);
TRINE_API trine_status trine_parse_kind(const char *name, int *kind);
TRINE_API const char *trine_kind_name(int kind);
/* clamped (optional) is set to 1 when the radius had to be pulled onto the disk. */
TRINE_API trine_status trine_estimate(trine_engine *engine, const trine_estimator_spec *spec,
                                      const int counts[3], double probs[3], int *clamped);
TRINE_API trine_status trine_lambda_min(int N, double *out);
TRINE_API trine_status trine_probs_from_state(double r, double phi, double probs[3]);
TRINE_API trine_status trine_state_from_probs(const double probs[3], double *r, double *phi);

/* --- risk ---------------------------------------------------------------- */
TRINE_API void trine_grid_default(trine_grid *grid);
TRINE_API trine_status trine_mse_at_state(trine_engine *engine, const trine_estimator_spec *spec,
                                          int N, double r, double phi, double *out);
TRINE_API trine_status trine_mse_at_probs(trine_engine *engine, const trine_estimator_spec *spec,
                                          int N, const double probs[3], double *out);
TRINE_API trine_status trine_classical_mse_closed_form(double beta, double p_sq, int N, int K,
                                                       double *out);
TRINE_API trine_status trine_profile_create(trine_engine *engine, const trine_estimator_spec *spec,
                                            int N, const trine_grid *grid, int workers,
                                            trine_profile **out);
TRINE_API void trine_profile_destroy(trine_profile *profile);
TRINE_API trine_status trine_profile_get_summary(const trine_profile *profile,
                                                 trine_profile_summary *out);
TRINE_API const char *trine_profile_estimator(const trine_profile *profile);
/* Coarse node i: state (r, phi), probabilities and MSE. */
TRINE_API trine_status trine_profile_node(const trine_profile *profile, size_t i, double *r,
                                          double *phi, double probs[3], double *mse);
TRINE_API trine_status trine_profile_write_csv(const trine_profile *profile, const char *path,
                                               int precision);

/* --- minimax ------------------------------------------------------------- */
/* beta_hi < 0 selects sqrt(N)/3 + 1. */
TRINE_API trine_status trine_optimal_beta(trine_engine *engine, int N, double beta_lo,
                                          double beta_hi, const trine_grid *grid, double tol,
                                          int workers, trine_search **out);
TRINE_API trine_status trine_optimal_lambda(int N, const trine_grid *grid, double tol, int workers,
                                            trine_search **out);
TRINE_API void trine_search_destroy(trine_search *search);
TRINE_API trine_status trine_search_get_summary(const trine_search *search,
                                                trine_search_summary *out);
TRINE_API trine_status trine_search_sample(const trine_search *search, size_t i,
                                           double *parameter, double *max_mse, double *min_mse);

/* --- simulation ---------------------------------------------------------- */
TRINE_API trine_status trine_sim_run(trine_engine *engine, const trine_estimator_spec *spec,
                                     const trine_sim_config *config, trine_sim **out);
TRINE_API void trine_sim_destroy(trine_sim *sim);
TRINE_API trine_status trine_sim_get_summary(const trine_sim *sim, trine_sim_summary *out);
TRINE_API trine_status trine_sim_write_csv(const trine_sim *sim, const char *path, int precision);
TRINE_API trine_status trine_sample_counts(const double probs[3], int N, uint64_t seed,
                                           int counts[3]);

#ifdef __cplusplus
}
#endif

#endif /* TRINE_C_H */
