/*
 * Copyright 2026 The guardlab Authors
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
 * C API of the guardlab moderation-training laboratory.
 *
 * All functions return grd_status; GRD_OK means success. On failure a
 * thread-local message is available via grd_last_error(). Objects are opaque
 * handles released with their grd_*_free function; strings returned through
 * char** out-parameters are released with grd_string_free.
 */

#ifndef GUARDLAB_H_
#define GUARDLAB_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum grd_status {
  GRD_OK = 0,
  GRD_ERR_INVALID_ARG = 1,
  GRD_ERR_IO = 2,
  GRD_ERR_PARSE = 3,
  GRD_ERR_VALIDATION = 4,
  GRD_ERR_CONFIG = 5,
  GRD_ERR_STATE = 6,
  GRD_ERR_TRANSPORT = 7,
  GRD_ERR_INTERNAL = 8
} grd_status;

typedef struct grd_config grd_config;
typedef struct grd_dataset grd_dataset;
typedef struct grd_policy grd_policy;

const char* grd_version(void);
const char* grd_status_name(grd_status status);

/* Message of the last failing call on this thread ("" if none). */
const char* grd_last_error(void);

void grd_string_free(char* text);

/* ---- configuration ------------------------------------------------- */

/* Built-in defaults for every key. */
grd_status grd_config_create(grd_config** out);

/* Defaults overlaid with a TOML file (flat subset, see README). */
grd_status grd_config_load(const char* toml_path, grd_config** out);

/* Sets one dotted key ("reward.beta") from a string value. Unknown keys and
 * type mismatches are GRD_ERR_CONFIG. */
grd_status grd_config_set(grd_config* config, const char* key,
                          const char* value);

/* Canonical TOML of the effective configuration. */
grd_status grd_config_dump(const grd_config* config, char** out_toml);

void grd_config_free(grd_config* config);

/* ---- datasets (JSONL, one sample object per line) -------------------- */

/* Reads, decodes images and validates. Parse problems carry line numbers,
 * validation problems the offending sample ids. */
grd_status grd_dataset_read(const char* jsonl_path, grd_dataset** out);

grd_status grd_dataset_write(const grd_dataset* dataset,
                             const char* jsonl_path);

size_t grd_dataset_size(const grd_dataset* dataset);

/* Per-modality and overall corpus statistics as a JSON object. */
grd_status grd_dataset_stats_json(const grd_dataset* dataset, char** out_json);

void grd_dataset_free(grd_dataset* dataset);

/* Seeded synthetic corpus per the synth.* config keys. */
grd_status grd_synthesize(const grd_config* config, grd_dataset** out);

/* Keeps the samples on which all reject.k sampled rollouts of the policy
 * scored incorrect. */
grd_status grd_reject_sample(const grd_config* config,
                             const grd_policy* policy,
                             const grd_dataset* dataset, grd_dataset** out);

/* Safety-aware concatenation until augmented samples reach augment.fraction
 * of the output. */
grd_status grd_augment(const grd_config* config, const grd_dataset* hard,
                       grd_dataset** out);

/* ---- policies ------------------------------------------------------- */

/* Fresh zero-initialized policy (uniform heads) per the policy.* keys. */
grd_status grd_policy_create(const grd_config* config, grd_policy** out);

grd_status grd_policy_load(const char* path, grd_policy** out);
grd_status grd_policy_save(const grd_policy* policy, const char* path);
void grd_policy_free(grd_policy* policy);

/* ---- training ------------------------------------------------------- */

/* Reasoning SFT over a corpus with gold reasoning. Writes the metric
 * history CSV when curves_csv_path is non-NULL. */
grd_status grd_train_sft(const grd_config* config, grd_policy* policy,
                         const grd_dataset* data, const char* curves_csv_path);

/* KL-free group-relative RL with the dynamic clip schedule and length-aware
 * reward. trainer.steps < 0 runs trainer.s_total optimizer updates. */
grd_status grd_train_rl(const grd_config* config, grd_policy* policy,
                        const grd_dataset* data, const char* curves_csv_path);

/* ---- evaluation ----------------------------------------------------- */

/* Evaluates the policy (or, when policy is NULL, the remote.* endpoint) on
 * one benchmark. task is "prompt" or "response"; group is "text", "image"
 * or "text_image". Appends per-sample records to log_jsonl_path when
 * non-NULL. The report (results + sample-weighted averages) is returned as
 * JSON. */
grd_status grd_evaluate_single(const grd_config* config,
                               const grd_policy* policy,
                               const char* data_jsonl_path, const char* name,
                               const char* task, const char* group,
                               const char* log_jsonl_path,
                               char** out_report_json);

/* Same over a manifest file: {"benchmarks": [{"name", "path", "task",
 * "group"}, ...]}; paths resolve relative to the manifest. */
grd_status grd_evaluate_manifest(const grd_config* config,
                                 const grd_policy* policy,
                                 const char* manifest_json_path,
                                 const char* log_jsonl_path,
                                 char** out_report_json);

/* Renders a report JSON string as the human-readable table. */
grd_status grd_report_render(const char* report_json, char** out_text);

/* ---- one-shot moderation -------------------------------------------- */

/* Moderates a single input (text and/or PGM image path, optional response)
 * with the policy or, when policy is NULL, the remote endpoint. out_text
 * receives the printable reasoning + verdicts; out_json the structured
 * result. Either out-parameter may be NULL. */
grd_status grd_moderate(const grd_config* config, const grd_policy* policy,
                        const char* text, const char* image_path,
                        const char* response, char** out_text,
                        char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GUARDLAB_H_ */
