/*
 * Copyright 2026 The flocvar Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to flocvar: simulation of VAR(p) processes with symmetric
 * stable noise, FLOC / least-squares / Yule-Walker estimation, Monte Carlo
 * benchmarking and residual diagnostics.
 *
 * Objects are opaque handles created by flv_*_create / flv_*_load / the
 * operations that return them, and released with the matching
 * flv_*_destroy (which accept NULL). Every fallible call returns an
 * flv_status; on failure, flv_last_error() describes the problem. The
 * message is thread-local and stays valid until the next failing call on the
 * same thread.
 *
 * Matrices cross the boundary row-major. A coefficient array for a model of
 * dimension r and order p holds p consecutive r*r blocks A_1 ... A_p.
 */
#ifndef FLOCVAR_FLOCVAR_H_
#define FLOCVAR_FLOCVAR_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FLOCVAR_BUILDING_LIBRARY)
#    define FLV_API __declspec(dllexport)
#  else
#    define FLV_API __declspec(dllimport)
#  endif
#else
#  define FLV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flv_status {
  FLV_OK = 0,
  FLV_ERR_VALIDATION = 1, /* bad arguments, malformed input, too-short series */
  FLV_ERR_NUMERICAL = 2,  /* singular system, non-convergence */
  FLV_ERR_IO = 3,         /* file could not be read or written */
  FLV_ERR_INTERNAL = 4
} flv_status;

typedef enum flv_method {
  FLV_METHOD_FLOC = 0,
  FLV_METHOD_LS = 1,
  FLV_METHOD_YW = 2
} flv_method;

typedef enum flv_normalizer {
  FLV_NORMALIZER_DEFAULT = 0, /* window for FLOC, full length for YW */
  FLV_NORMALIZER_WINDOW = 1,
  FLV_NORMALIZER_FULL = 2
} flv_normalizer;

typedef struct flv_series flv_series;
typedef struct flv_model flv_model;
typedef struct flv_report flv_report;
typedef struct flv_mc_report flv_mc_report;
typedef struct flv_diagnostics flv_diagnostics;

FLV_API const char* flv_version(void);
FLV_API const char* flv_last_error(void);

/* ---- series ------------------------------------------------------------ */

FLV_API flv_status flv_series_create(size_t length, size_t dim, const double* row_major,
                                     flv_series** out);
/* CSV with a header row; a leading t/time/date/index column is dropped. */
FLV_API flv_status flv_series_read_csv(const char* path, flv_series** out);
/* Header t,x1,...,xr; 17 significant digits. */
FLV_API flv_status flv_series_write_csv(const flv_series* series, const char* path);
FLV_API size_t flv_series_length(const flv_series* series);
FLV_API size_t flv_series_dim(const flv_series* series);
/* Copies length*dim values row-major; capacity is in doubles. */
FLV_API flv_status flv_series_copy(const flv_series* series, double* row_major, size_t capacity);
FLV_API void flv_series_destroy(flv_series* series);

/* ---- model and simulation ---------------------------------------------- */

/* alphas / sigmas hold one value per component (symmetric noise). */
FLV_API flv_status flv_model_create(size_t dim, size_t order, const double* coeffs,
                                    const double* alphas, const double* sigmas, flv_model** out);

typedef struct flv_sim_defaults {
  int has_length;
  size_t length;
  int has_burn_in;
  size_t burn_in;
  int has_seed;
  uint64_t seed;
} flv_sim_defaults;

/* key = value model file (dim, order, A1..Ap, alpha, sigma; optional n,
 * burn_in, seed reported through `defaults`, which may be NULL). */
FLV_API flv_status flv_model_load(const char* path, flv_model** out, flv_sim_defaults* defaults);
FLV_API size_t flv_model_dim(const flv_model* model);
FLV_API size_t flv_model_order(const flv_model* model);
FLV_API flv_status flv_model_is_causal(const flv_model* model, double margin, int* causal,
                                       double* spectral_radius);
FLV_API flv_status flv_simulate(const flv_model* model, size_t length, size_t burn_in,
                                uint64_t seed, flv_series** out);
FLV_API void flv_model_destroy(flv_model* model);

/* ---- estimation -------------------------------------------------------- */

typedef struct flv_estimate_options {
  flv_method method;
  size_t order;
  /* FLOC exponent B. NaN selects B = max_j alpha_j - 1.05 (>= 0) from
   * per-column stable fits of the mean-corrected data. */
  double b_exp;
  flv_normalizer normalizer;
} flv_estimate_options;

FLV_API void flv_estimate_options_default(flv_estimate_options* options);
FLV_API flv_status flv_estimate(const flv_series* series, const flv_estimate_options* options,
                                flv_report** out);
FLV_API flv_method flv_report_method(const flv_report* report);
FLV_API size_t flv_report_order(const flv_report* report);
FLV_API size_t flv_report_dim(const flv_report* report);
/* order*dim*dim doubles. */
FLV_API flv_status flv_report_coeffs(const flv_report* report, double* out, size_t capacity);
/* NaN for reports loaded from CSV or for LS/YW (B). */
FLV_API double flv_report_condition(const flv_report* report);
FLV_API double flv_report_b_exp(const flv_report* report);
/* Residual series of an estimation (not available for loaded reports). */
FLV_API flv_status flv_report_residuals(const flv_report* report, flv_series** out);
/* method,k,i,j,value */
FLV_API flv_status flv_report_write_csv(const flv_report* report, const char* path);
FLV_API flv_status flv_report_write_summary(const flv_report* report, const char* path);
/* Reads coefficients written by flv_report_write_csv. */
FLV_API flv_status flv_report_load_csv(const char* path, flv_report** out);
FLV_API void flv_report_destroy(flv_report* report);

/* ---- Monte Carlo --------------------------------------------------------- */

typedef struct flv_mc_overrides {
  int has_seed;
  uint64_t seed;
  int has_replications;
  size_t replications;
  int has_threads;
  unsigned threads;
} flv_mc_overrides;

typedef struct flv_mc_cell {
  flv_method method;
  double b_exp;       /* FLOC only */
  size_t k, i, j;     /* 1-based: entry (i, j) of A_k */
  size_t coefficient; /* 1-based a_n label, column-major through A_1, A_2, ... */
  double truth;
  double mean;
  double rmse;
  size_t count;
  size_t failures;
} flv_mc_cell;

/* `overrides` may be NULL. */
FLV_API flv_status flv_montecarlo_run(const char* config_path, const flv_mc_overrides* overrides,
                                      flv_mc_report** out);
FLV_API size_t flv_mc_report_cell_count(const flv_mc_report* report);
FLV_API flv_status flv_mc_report_cell(const flv_mc_report* report, size_t index, flv_mc_cell* out);
/* Either path may be NULL to skip that file. */
FLV_API flv_status flv_mc_report_write(const flv_mc_report* report, const char* table_path,
                                       const char* long_path);
FLV_API void flv_mc_report_destroy(flv_mc_report* report);

/* ---- diagnostics --------------------------------------------------------- */

typedef struct flv_diag_options {
  size_t max_lag;         /* default 20 */
  size_t band_replicates; /* default 200; 0 disables the null band */
  size_t ks_repetitions;  /* default 100 */
  size_t qq_grid;         /* default 99 */
  double b_exp;           /* NaN: per column, fitted alpha - 1.05 */
  uint64_t seed;
} flv_diag_options;

FLV_API void flv_diag_options_default(flv_diag_options* options);
/* Residuals of `fitted` on the mean-corrected `data`, then auto-FLOC, KS
 * and QQ diagnostics per column. */
FLV_API flv_status flv_diagnose(const flv_series* data, const flv_report* fitted,
                                const flv_diag_options* options, flv_diagnostics** out);
FLV_API size_t flv_diagnostics_columns(const flv_diagnostics* diag);
/* params receives (alpha, beta, sigma, delta); any pointer may be NULL. */
FLV_API flv_status flv_diagnostics_ks(const flv_diagnostics* diag, size_t column,
                                      double* statistic, double* p_value, double params[4]);
/* autofloc_<j>.csv, qq_<j>.csv and ks.txt inside `dir` (created). */
FLV_API flv_status flv_diagnostics_write(const flv_diagnostics* diag, const char* dir);
FLV_API void flv_diagnostics_destroy(flv_diagnostics* diag);

/* Full workflow: fit alpha per column, pick B (NaN: default rule), FLOC
 * estimate, residual diagnostics. Either output pointer may be NULL. */
FLV_API flv_status flv_pipeline_run(const flv_series* series, size_t order, double b_exp,
                                    const flv_diag_options* options, flv_report** estimate,
                                    flv_diagnostics** diagnostics);

/* ---- stable laws --------------------------------------------------------- */

/* params: (alpha, beta, sigma, delta). */
FLV_API flv_status flv_stable_fit(const double* sample, size_t count, double params[4]);
FLV_API flv_status flv_stable_sample(const double params[4], size_t count, uint64_t seed,
                                     double* out);
FLV_API flv_status flv_stable_cdf(const double params[4], double x, double* out);

#ifdef __cplusplus
}
#endif

#endif /* FLOCVAR_FLOCVAR_H_ */
