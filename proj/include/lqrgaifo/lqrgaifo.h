// Copyright 2026 The lqrgaifo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the lqrgaifo library. Every object is an opaque handle
 * released with its matching *_free function; every fallible call returns an
 * lg_status and leaves a message for lg_last_error(). */

#ifndef LQRGAIFO_LQRGAIFO_H_
#define LQRGAIFO_LQRGAIFO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LG_API __declspec(dllexport)
#else
#define LG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lg_status {
  LG_OK = 0,
  LG_ERR_INVALID_ARGUMENT = 1,
  LG_ERR_CONFIG = 2,
  LG_ERR_IO = 3,
  LG_ERR_NUMERICAL = 4,
  LG_ERR_INTERNAL = 5
} lg_status;

typedef struct lg_config lg_config;
typedef struct lg_controller lg_controller;
typedef struct lg_demos lg_demos;
typedef struct lg_run lg_run;

typedef struct lg_iteration_record {
  int iteration;
  double mean_cost;
  double eval_cost;
  double norm_score;
  double kl;
  double disc_loss;
  double seconds;
  double wasserstein_gap;
  int aborted;
} lg_iteration_record;

typedef struct lg_expert_info {
  double eval_cost;
  double final_distance;
  int iterations;
  int converged;
} lg_expert_info;

typedef struct lg_evaluation {
  double eval_cost;
  double random_cost;
  double expert_cost; /* NaN when unknown */
  double norm_score;  /* NaN when the expert cost is unknown */
  double final_distance;
} lg_evaluation;

/* Message of the last failure on the calling thread ("" if none). */
LG_API const char* lg_last_error(void);
LG_API const char* lg_version(void);

/* Configuration: flat key=value entries, all keys defaulted. */
LG_API lg_status lg_config_new(lg_config** out);
LG_API lg_status lg_config_load(const char* path, lg_config** out);
LG_API lg_status lg_config_set(lg_config* config, const char* key, const char* value);
/* Applies "key=value". */
LG_API lg_status lg_config_apply(lg_config* config, const char* assignment);
/* Copies the value (NUL-terminated) into buf when it fits; *needed receives
 * the required size including the terminator. */
LG_API lg_status lg_config_get(const lg_config* config, const char* key, char* buf,
                               size_t capacity, size_t* needed);
LG_API lg_status lg_config_validate(const lg_config* config);
LG_API lg_status lg_config_save(const lg_config* config, const char* path);
LG_API void lg_config_free(lg_config* config);

/* Expert training on the reaching cost of the configured environment. */
LG_API lg_status lg_train_expert(const lg_config* config, uint64_t seed, lg_controller** out,
                                 lg_expert_info* info);

LG_API lg_status lg_controller_load(const char* path, lg_controller** out);
LG_API lg_status lg_controller_save(const lg_controller* controller, const char* path);
LG_API int lg_controller_horizon(const lg_controller* controller);
LG_API void lg_controller_free(lg_controller* controller);

/* Noisy rollouts of the controller in the configured environment, with the
 * actions stripped. */
LG_API lg_status lg_record_demos(const lg_controller* controller, const lg_config* config,
                                 int count, uint64_t seed, lg_demos** out);
LG_API lg_status lg_demos_load(const char* path, lg_demos** out);
LG_API lg_status lg_demos_save(const lg_demos* demos, const char* path);
/* Appends the trajectories of `other` to `into`. */
LG_API lg_status lg_demos_merge(lg_demos* into, const lg_demos* other);
LG_API size_t lg_demos_count(const lg_demos* demos);
LG_API void lg_demos_free(lg_demos* demos);

/* Runs the imitation loop for one seed. When csv_path is non-NULL each
 * iteration is appended to it (with header) as soon as it completes. */
LG_API lg_status lg_imitate(const lg_config* config, const lg_demos* demos, uint64_t seed,
                            const char* csv_path, lg_run** out);
LG_API size_t lg_run_size(const lg_run* run);
LG_API lg_status lg_run_record(const lg_run* run, size_t index, lg_iteration_record* out);
LG_API lg_status lg_run_write_csv(const lg_run* run, const char* path);
/* A copy of the final controller, owned by the caller. */
LG_API lg_status lg_run_controller(const lg_run* run, lg_controller** out);
LG_API void lg_run_free(lg_run* run);

/* Noiseless evaluation in the configured environment. The expert cost comes
 * from the config key expert_cost, else from demos (may be NULL). */
LG_API lg_status lg_evaluate(const lg_controller* controller, const lg_config* config,
                             const lg_demos* demos, lg_evaluation* out);

/* Per-iteration mean and standard error across run logs. */
LG_API lg_status lg_summarize_csvs(const char* const* csv_paths, size_t count,
                                   const char* summary_path);
/* gnuplot script over summary files; titles may be NULL. */
LG_API lg_status lg_write_plot_script(const char* const* summary_paths,
                                      const char* const* titles, size_t count,
                                      const char* script_path, const char* image_path);

#ifdef __cplusplus
}
#endif

#endif /* LQRGAIFO_LQRGAIFO_H_ */
