// Copyright 2026 The Quantale Authors
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
#ifndef QUANTALE_QUANTALE_H_
#define QUANTALE_QUANTALE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(QTL_BUILDING_LIBRARY)
#define QTL_API __attribute__((visibility("default")))
#else
#define QTL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qtl_status {
  QTL_OK = 0,
  QTL_ERR_INVALID_ARGUMENT = 1,
  QTL_ERR_PARSE = 2,
  QTL_ERR_VALIDATION = 3,
  QTL_ERR_IO = 4,
  QTL_ERR_UNKNOWN_VARIABLE = 5,
  QTL_ERR_ZERO_PROBABILITY = 6,
  QTL_ERR_EXPLOSION_GUARD = 7,
  QTL_ERR_CYCLE = 8,
  QTL_ERR_PRECISE_IN_FAST_PATH = 9,
  QTL_ERR_ALL_FALSE = 10,
  QTL_ERR_NO_VIABLE_UTTERANCE = 11,
  QTL_ERR_INTERNAL = 12
} qtl_status;

typedef enum qtl_engine {
  QTL_ENGINE_NAIVE = 0,
  QTL_ENGINE_EXACT = 1,
  QTL_ENGINE_MC = 2,
  QTL_ENGINE_GENERIC_FAST = 3
} qtl_engine;

typedef enum qtl_scheme {
  QTL_SCHEME_INDEPENDENT = 0,
  QTL_SCHEME_COUPLED_THRESHOLD = 1
} qtl_scheme;

typedef struct qtl_world qtl_world;
typedef struct qtl_prop qtl_prop;
typedef struct qtl_scenario qtl_scenario;
typedef struct qtl_result qtl_result;

typedef struct qtl_eval_options {
  qtl_engine engine;
  qtl_scheme scheme;
  uint64_t samples;
  uint64_t seed;
  uint64_t max_configurations;
  uint32_t max_vague_nodes;
  uint32_t threads;
  double generic_empty_restriction;
} qtl_eval_options;

/* Fills in the library defaults: exact engine, independent scheme,
   10000 samples, seed 0, 2^20 configurations, 4 vague nodes, 1 thread. */
QTL_API void qtl_eval_options_init(qtl_eval_options* options);

QTL_API const char* qtl_version(void);
QTL_API const char* qtl_status_name(qtl_status status);

/* Message of the last failed call on this thread, or "". */
QTL_API const char* qtl_last_error(void);
/* JSON array of source diagnostics from the last parse or load on this
   thread: [{"severity", "message", "line", "column", "snippet"}]. */
QTL_API const char* qtl_last_diagnostics(void);
/* The same diagnostics as human-readable text, prefixed with source_name. */
QTL_API char* qtl_last_diagnostics_text(const char* source_name);

/* Releases any char* returned by this library. */
QTL_API void qtl_string_free(char* text);

QTL_API qtl_status qtl_world_parse(const char* text, size_t length, qtl_world** out);
QTL_API qtl_status qtl_world_load(const char* path, qtl_world** out);
QTL_API qtl_status qtl_world_serialize(const qtl_world* world, char** out);
QTL_API void qtl_world_free(qtl_world* world);

QTL_API qtl_status qtl_prop_parse(const char* text, size_t length, qtl_prop** out);
QTL_API qtl_status qtl_prop_load(const char* path, qtl_prop** out);
QTL_API qtl_status qtl_prop_serialize(const qtl_prop* prop, char** out);
QTL_API void qtl_prop_free(qtl_prop* prop);

/* Validates prop against world. Writes a JSON array of diagnostics
   ({"code", "message", "line"?, "column"?}) to *diagnostics and returns
   QTL_OK when it is empty, QTL_ERR_VALIDATION otherwise. */
QTL_API qtl_status qtl_check(const qtl_world* world, const qtl_prop* prop, char** diagnostics);

QTL_API qtl_status qtl_eval(const qtl_world* world, const qtl_prop* prop,
                            const qtl_eval_options* options, qtl_result** out);
QTL_API double qtl_result_probability(const qtl_result* result);
/* {"probability", "engine", "ci"?, "samples"?, "seed"?, "scheme"?} */
QTL_API qtl_status qtl_result_json(const qtl_result* result, char** out);
QTL_API void qtl_result_free(qtl_result* result);

/* Exact versus fast-path generic evaluation: {"exact", "fast", "difference"}. */
QTL_API qtl_status qtl_compare_generic(const qtl_world* world, const qtl_prop* prop,
                                       const qtl_eval_options* options, char** out);

/* CSV "ratio,value" with points evenly spaced ratios in [0,1]. */
QTL_API qtl_status qtl_curve_csv(const char* kind, uint32_t points, char** out);

QTL_API qtl_status qtl_scenario_parse(const char* text, size_t length, const char* base_dir,
                                      qtl_scenario** out);
QTL_API qtl_status qtl_scenario_load(const char* path, qtl_scenario** out);
QTL_API void qtl_scenario_free(qtl_scenario* scenario);

/* agent is "l0", "l1" (focus = utterance id) or "s1" (focus = state id).
   Writes {"support", "probs"} plus, when verbose, the meaning matrix. */
QTL_API qtl_status qtl_rsa(const qtl_scenario* scenario, const char* agent, const char* focus,
                           int verbose, char** out);

/* Pragmatic-listener reading report for an utterance, with an optional
   alpha sweep (alphas may be NULL when count is 0). */
QTL_API qtl_status qtl_rsa_reading(const qtl_scenario* scenario, const char* utterance,
                                   const double* alphas, size_t count, char** out);

#ifdef __cplusplus
}
#endif

#endif  // QUANTALE_QUANTALE_H_
