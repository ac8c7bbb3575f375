/* Copyright 2026 The nscorr Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to nscorr.
 *
 * Every fallible call returns an nscorr_status. On failure the message is
 * available from nscorr_last_error() on the same thread until the next
 * call. Handles are opaque; each *_create / *_load / *_run has a matching
 * *_destroy that accepts NULL.
 *
 * String outputs use the two-call convention: pass a buffer and its
 * capacity; `needed` receives the full length including the terminator,
 * and NSCORR_BUFFER_TOO_SMALL is returned when it does not fit.
 */

#ifndef NSCORR_H
#define NSCORR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NSCORR_BUILDING_LIBRARY)
#    define NSCORR_API __declspec(dllexport)
#  else
#    define NSCORR_API __declspec(dllimport)
#  endif
#else
#  define NSCORR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nscorr_status {
  NSCORR_OK = 0,
  NSCORR_PARAMETER_OUT_OF_RANGE = 1,
  NSCORR_MODEL_NOT_POSITIVE_DEFINITE = 2,
  NSCORR_NON_SYMMETRIC_INPUT = 3,
  NSCORR_DIMENSION_MISMATCH = 4,
  NSCORR_CONVERGENCE_FAILURE = 5,
  NSCORR_EMPTY_INPUT = 6,
  NSCORR_DEGENERATE_DENOMINATOR = 7,
  NSCORR_BOTH_ROOTS_DIVERGED = 8,
  NSCORR_MAX_ITERATIONS_EXCEEDED = 9,
  NSCORR_BRANCH_SELECTION_AMBIGUOUS = 10,
  NSCORR_DISJOINT_SUPPORTS = 11,
  NSCORR_CONFIG_INVALID = 12,
  NSCORR_IO_ERROR = 13,
  NSCORR_INTERNAL = 14,
  NSCORR_INVALID_ARGUMENT = 100,
  NSCORR_BUFFER_TOO_SMALL = 101
} nscorr_status;

typedef enum nscorr_cross_kind {
  NSCORR_CROSS_RANK_ONE = 0,
  NSCORR_CROSS_EXP_DECAY = 1
} nscorr_cross_kind;

typedef enum nscorr_mode {
  NSCORR_MODE_THEORY_ONLY = 0,
  NSCORR_MODE_MC_ONLY = 1,
  NSCORR_MODE_FULL = 2
} nscorr_mode;

typedef struct nscorr_model nscorr_model;
typedef struct nscorr_curve nscorr_curve;
typedef struct nscorr_config nscorr_config;
typedef struct nscorr_run nscorr_run;

NSCORR_API const char* nscorr_version(void);
NSCORR_API const char* nscorr_status_name(nscorr_status status);
NSCORR_API const char* nscorr_last_error(void);

/* Process exit status for a failed call: 2 for configuration and model
 * errors, 3 for solver failures, 0 for NSCORR_OK. */
NSCORR_API int nscorr_status_exit_code(nscorr_status status);

/* Correlation models. */
NSCORR_API nscorr_status nscorr_model_create(int n, int m, double a, double b, double c,
                                             nscorr_cross_kind kind, nscorr_model** out);
NSCORR_API void nscorr_model_destroy(nscorr_model* model);
NSCORR_API nscorr_status nscorr_model_dims(const nscorr_model* model, int* n, int* m);
/* Descending zeta eigenvalues; `count` receives n. */
NSCORR_API nscorr_status nscorr_model_zeta_eigs(const nscorr_model* model, double* out,
                                                size_t capacity, size_t* count);
NSCORR_API nscorr_status nscorr_model_max_eta_singular_value(const nscorr_model* model,
                                                             double* out);
NSCORR_API nscorr_status nscorr_model_json(const nscorr_model* model, char* buffer,
                                           size_t capacity, size_t* needed);

/* Theory density of C for a model observed over t samples. epsilon <= 0
 * selects the default. */
NSCORR_API nscorr_status nscorr_theory_density(const nscorr_model* model, int t,
                                               double epsilon, nscorr_curve** out);
/* Ascending eigenvalues of one C realization, deterministic in
 * (seed, stream). `out` must hold n values. */
NSCORR_API nscorr_status nscorr_sample_spectrum(const nscorr_model* model, int t,
                                                uint64_t seed, uint64_t stream,
                                                double* out, size_t capacity);

NSCORR_API void nscorr_curve_destroy(nscorr_curve* curve);
NSCORR_API size_t nscorr_curve_size(const nscorr_curve* curve);
/* Borrowed pointers, valid until the curve is destroyed. */
NSCORR_API nscorr_status nscorr_curve_data(const nscorr_curve* curve, const double** grid,
                                           const double** rho, size_t* size);
NSCORR_API nscorr_status nscorr_curve_integral(const nscorr_curve* curve, double* out);
NSCORR_API nscorr_status nscorr_curve_moment(const nscorr_curve* curve, int order,
                                             double* out);
NSCORR_API nscorr_status nscorr_curve_write_csv(const nscorr_curve* curve, const char* path);

/* Experiment configs. */
NSCORR_API nscorr_status nscorr_config_load(const char* path, nscorr_config** out);
NSCORR_API nscorr_status nscorr_config_preset(const char* name, nscorr_config** out);
NSCORR_API void nscorr_config_destroy(nscorr_config* config);
NSCORR_API nscorr_status nscorr_config_set_mode(nscorr_config* config, nscorr_mode mode);
NSCORR_API nscorr_status nscorr_config_set_seed(nscorr_config* config, uint64_t seed);
NSCORR_API nscorr_status nscorr_config_set_output_dir(nscorr_config* config,
                                                      const char* path);
NSCORR_API nscorr_status nscorr_config_set_threads(nscorr_config* config, int threads);
NSCORR_API nscorr_status nscorr_config_json(const nscorr_config* config, char* buffer,
                                            size_t capacity, size_t* needed);
NSCORR_API nscorr_status nscorr_parse_mode(const char* name, nscorr_mode* out);

NSCORR_API size_t nscorr_preset_count(void);
/* NULL when index is out of range. */
NSCORR_API const char* nscorr_preset_name(size_t index);

/* Runs an experiment and writes its artifacts. A completed run returns
 * NSCORR_OK even when thresholds fail; check nscorr_run_exit_code. */
NSCORR_API nscorr_status nscorr_run_experiment(const nscorr_config* config,
                                               nscorr_run** out);
NSCORR_API void nscorr_run_destroy(nscorr_run* run);
/* 0 when every threshold passed, 1 otherwise. */
NSCORR_API int nscorr_run_exit_code(const nscorr_run* run);
NSCORR_API const char* nscorr_run_summary(const nscorr_run* run);
NSCORR_API const char* nscorr_run_manifest_path(const nscorr_run* run);

#ifdef __cplusplus
}
#endif

#endif /* NSCORR_H */
