// Copyright 2026 The SQMG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SQMG_SQMG_H
#define SQMG_SQMG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SQMG_BUILDING_LIBRARY)
#define SQMG_API __declspec(dllexport)
#else
#define SQMG_API __declspec(dllimport)
#endif
#else
#define SQMG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 2, 3 and 4 double as CLI exit codes. */
typedef enum sqmg_status {
    SQMG_OK = 0,
    SQMG_ERR_INVALID_ARGUMENT = 1,
    SQMG_ERR_CONFIG = 2,
    SQMG_ERR_CAPACITY = 3,
    SQMG_ERR_NUMERICAL = 4,
    SQMG_ERR_FORMAT = 5,
    SQMG_ERR_IO = 6,
    SQMG_ERR_UNSUPPORTED = 7,
    SQMG_ERR_INTERNAL = 8
} sqmg_status;

typedef struct sqmg_config sqmg_config;
typedef struct sqmg_samples sqmg_samples;

/* Receives one JSON object per completed training evaluation or bench row. */
typedef void (*sqmg_progress_fn)(const char* json_line, void* user);

/* Objective for sqmg_cobyla_minimize. Return nonzero to abort. */
typedef int (*sqmg_objective_fn)(const double* x, size_t n, double* f, void* user);

SQMG_API const char* sqmg_version(void);
SQMG_API const char* sqmg_status_name(sqmg_status status);
/* Message of the last failure on the calling thread; never NULL. */
SQMG_API const char* sqmg_last_error(void);
/* Frees strings returned through char** out-parameters. */
SQMG_API void sqmg_string_free(char* s);

/* ---- configuration ---- */

SQMG_API sqmg_status sqmg_config_default(sqmg_config** out);
SQMG_API sqmg_status sqmg_config_load(const char* path, sqmg_config** out);
SQMG_API sqmg_status sqmg_config_from_json(const char* json_text, sqmg_config** out);
/* Dotted-path override, e.g. "mps.chi_max=32". The config is unchanged on error. */
SQMG_API sqmg_status sqmg_config_set(sqmg_config* config, const char* assignment);
SQMG_API sqmg_status sqmg_config_to_json(const sqmg_config* config, char** out_json);
SQMG_API void sqmg_config_free(sqmg_config* config);

/* ---- scaling ---- */

SQMG_API uint64_t sqmg_param_count(uint32_t n_atoms);
/* variant: "hybrid" or "static". */
SQMG_API sqmg_status sqmg_qubit_count(uint32_t n_atoms, const char* variant, uint64_t* out);
SQMG_API sqmg_status sqmg_ansatz_param_count(const sqmg_config* config, uint32_t* out);

/* ---- pipeline commands; outputs land in the config's output.dir ---- */

/* resume_history may be NULL. */
SQMG_API sqmg_status sqmg_train(const sqmg_config* config, const char* resume_history, sqmg_progress_fn progress,
                                void* user, char** out_summary);
/* params_path may be NULL to use generate.params_file from the config. */
SQMG_API sqmg_status sqmg_generate(const sqmg_config* config, const char* params_path, char** out_summary);
SQMG_API sqmg_status sqmg_decode(const sqmg_config* config, const char* samples_path, char** out_summary);
SQMG_API sqmg_status sqmg_bench(const sqmg_config* config, sqmg_progress_fn progress, void* user,
                                char** out_summary);
/* out_paths receives a JSON array of written file paths. */
SQMG_API sqmg_status sqmg_report(const char* input_path, const char* output_dir, char** out_paths);

/* ---- sampling ---- */

SQMG_API sqmg_status sqmg_sample(const sqmg_config* config, const double* params, size_t n_params,
                                 uint64_t shots, uint64_t seed, sqmg_samples** out);
SQMG_API sqmg_status sqmg_samples_read(const char* path, sqmg_samples** out);
/* format: "jsonl" or "binary". */
SQMG_API sqmg_status sqmg_samples_write(const sqmg_samples* samples, const char* path, const char* format);
SQMG_API uint64_t sqmg_samples_shots(const sqmg_samples* samples);
SQMG_API uint32_t sqmg_samples_n_atoms(const sqmg_samples* samples);
/* Codes per record: one atom code (0-7) per atom, then one bond code (0-3)
 * per atom pair in (0,1), (0,2), ..., (1,2), ... order. */
SQMG_API uint32_t sqmg_samples_record_width(const sqmg_samples* samples);
/* Copies one record into codes[0..len); len must equal the record width. */
SQMG_API sqmg_status sqmg_samples_record(const sqmg_samples* samples, uint64_t shot, uint8_t* codes, size_t len);
SQMG_API void sqmg_samples_free(sqmg_samples* samples);

/* ---- molecules ---- */

/* Decodes and validates one record; out_json is one molecules JSONL line. */
SQMG_API sqmg_status sqmg_decode_record(const sqmg_config* config, const uint8_t* codes, size_t len,
                                        char** out_json);
/* Parses SMILES and rewrites it canonically. */
SQMG_API sqmg_status sqmg_canonical_smiles(const char* smiles, char** out_smiles);
SQMG_API sqmg_status sqmg_canonical_key(const char* smiles, char** out_key);

/* ---- optimization ---- */

/* Minimizes within [lower, upper] (both or neither NULL); x holds x0 on entry and
 * the best point on return. */
SQMG_API sqmg_status sqmg_cobyla_minimize(sqmg_objective_fn f, void* user, size_t n, double* x,
                                          const double* lower, const double* upper, double rhobeg,
                                          double rhoend, uint32_t maxfun, double* out_f, uint32_t* out_evals);

#ifdef __cplusplus
}
#endif

#endif
