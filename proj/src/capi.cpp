// Copyright 2026 The guardlab Authors
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

#include "guardlab.h"

#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "guardlab/config.hpp"
#include "guardlab/dataset_io.hpp"
#include "guardlab/error.hpp"
#include "guardlab/eval.hpp"
#include "guardlab/fsutil.hpp"
#include "guardlab/pipeline.hpp"
#include "guardlab/policy.hpp"
#include "guardlab/remote.hpp"
#include "guardlab/trainer.hpp"
#include "guardlab/version.hpp"

using guardlab::Error;
using guardlab::ErrorKind;

struct grd_config {
  guardlab::RunConfig config;
};

struct grd_dataset {
  guardlab::Dataset dataset;
};

struct grd_policy {
  guardlab::ToyPolicy policy;
};

namespace {

thread_local std::string g_last_error;

grd_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
      return GRD_ERR_IO;
    case ErrorKind::kParseError:
      return GRD_ERR_PARSE;
    case ErrorKind::kConfigError:
      return GRD_ERR_CONFIG;
    case ErrorKind::kModalityMismatch:
    case ErrorKind::kOrphanResponseLabel:
    case ErrorKind::kMissingResponseLabel:
    case ErrorKind::kBadImage:
    case ErrorKind::kValidationFailed:
    case ErrorKind::kInsufficientSamples:
    case ErrorKind::kTaskMismatch:
    case ErrorKind::kGroupTooSmall:
    case ErrorKind::kLengthMismatch:
    case ErrorKind::kEmptyInput:
    case ErrorKind::kStepOutOfRange:
      return GRD_ERR_VALIDATION;
    case ErrorKind::kStateError:
      return GRD_ERR_STATE;
    case ErrorKind::kTransport:
    case ErrorKind::kTimeout:
      return GRD_ERR_TRANSPORT;
  }
  return GRD_ERR_INTERNAL;
}

template <typename Fn>
grd_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GRD_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GRD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GRD_ERR_INTERNAL;
  }
}

grd_status invalid_arg(const char* what) {
  g_last_error = what;
  return GRD_ERR_INVALID_ARG;
}

char* dup_string(const std::string& text) {
  char* out = new char[text.size() + 1];
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

// Trains with the stages shared by SFT and RL entry points.
guardlab::Trainer make_trainer(const guardlab::RunConfig& config,
                               guardlab::ToyPolicy& policy) {
  return guardlab::Trainer(policy, config.trainer(), config.reward());
}

guardlab::Backend backend_for(const guardlab::RunConfig& config,
                              const grd_policy* policy) {
  if (policy != nullptr) {
    return guardlab::toy_backend(policy->policy);
  }
  guardlab::RemoteEndpoint endpoint = config.remote();
  if (endpoint.base_url.empty()) {
    guardlab::fail(ErrorKind::kConfigError,
                   "remote.base_url must be set for the remote backend");
  }
  guardlab::PromptTemplate tmpl = config.prompt_template();
  return [endpoint, tmpl](const guardlab::Sample& sample) {
    return guardlab::remote_moderate(endpoint, sample, tmpl);
  };
}

grd_status evaluate_specs(const grd_config* config, const grd_policy* policy,
                          std::vector<guardlab::BenchmarkSpec> specs,
                          const char* log_jsonl_path, char** out_report_json) {
  return guarded([&] {
    std::vector<guardlab::EvalRecord> log;
    guardlab::BenchmarkReport report = guardlab::evaluate(
        backend_for(config->config, policy), specs,
        static_cast<int>(config->config.get_int("eval.concurrency")),
        log_jsonl_path != nullptr ? &log : nullptr);
    if (log_jsonl_path != nullptr) {
      guardlab::atomic_write_file(log_jsonl_path,
                                  guardlab::eval_log_to_jsonl(log));
    }
    if (out_report_json != nullptr) {
      *out_report_json = dup_string(guardlab::report_to_json(report));
    }
  });
}

nlohmann::ordered_json stats_to_json(const guardlab::ModalityStats& stats) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  obj["sample_count"] = stats.sample_count;
  obj["reasoning_steps"] = stats.reasoning_steps;
  if (stats.mean_steps_per_sample.has_value()) {
    obj["mean_steps_per_sample"] = *stats.mean_steps_per_sample;
  }
  if (stats.mean_chars_per_step.has_value()) {
    obj["mean_chars_per_step"] = *stats.mean_chars_per_step;
  }
  return obj;
}

}  // namespace

extern "C" {

const char* grd_version(void) { return guardlab::kVersion; }

const char* grd_status_name(grd_status status) {
  switch (status) {
    case GRD_OK: return "ok";
    case GRD_ERR_INVALID_ARG: return "invalid_argument";
    case GRD_ERR_IO: return "io";
    case GRD_ERR_PARSE: return "parse";
    case GRD_ERR_VALIDATION: return "validation";
    case GRD_ERR_CONFIG: return "config";
    case GRD_ERR_STATE: return "state";
    case GRD_ERR_TRANSPORT: return "transport";
    case GRD_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* grd_last_error(void) { return g_last_error.c_str(); }

void grd_string_free(char* text) { delete[] text; }

grd_status grd_config_create(grd_config** out) {
  if (out == nullptr) return invalid_arg("out must not be NULL");
  return guarded([&] { *out = new grd_config(); });
}

grd_status grd_config_load(const char* toml_path, grd_config** out) {
  if (toml_path == nullptr || out == nullptr) {
    return invalid_arg("toml_path and out must not be NULL");
  }
  return guarded([&] {
    *out = new grd_config{guardlab::RunConfig::load(toml_path)};
  });
}

grd_status grd_config_set(grd_config* config, const char* key,
                          const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return invalid_arg("config, key and value must not be NULL");
  }
  return guarded([&] { config->config.set(key, value); });
}

grd_status grd_config_dump(const grd_config* config, char** out_toml) {
  if (config == nullptr || out_toml == nullptr) {
    return invalid_arg("config and out_toml must not be NULL");
  }
  return guarded([&] { *out_toml = dup_string(config->config.dump_toml()); });
}

void grd_config_free(grd_config* config) { delete config; }

grd_status grd_dataset_read(const char* jsonl_path, grd_dataset** out) {
  if (jsonl_path == nullptr || out == nullptr) {
    return invalid_arg("jsonl_path and out must not be NULL");
  }
  return guarded([&] {
    *out = new grd_dataset{guardlab::ingest(jsonl_path)};
  });
}

grd_status grd_dataset_write(const grd_dataset* dataset,
                             const char* jsonl_path) {
  if (dataset == nullptr || jsonl_path == nullptr) {
    return invalid_arg("dataset and jsonl_path must not be NULL");
  }
  return guarded([&] {
    guardlab::write_jsonl_file(dataset->dataset, jsonl_path);
  });
}

size_t grd_dataset_size(const grd_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->dataset.samples.size();
}

grd_status grd_dataset_stats_json(const grd_dataset* dataset, char** out_json) {
  if (dataset == nullptr || out_json == nullptr) {
    return invalid_arg("dataset and out_json must not be NULL");
  }
  return guarded([&] {
    guardlab::DatasetStats stats = guardlab::dataset_stats(dataset->dataset);
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    obj["text"] = stats_to_json(stats.text);
    obj["image"] = stats_to_json(stats.image);
    obj["text_image"] = stats_to_json(stats.text_image);
    obj["overall"] = stats_to_json(stats.overall);
    *out_json = dup_string(obj.dump(2));
  });
}

void grd_dataset_free(grd_dataset* dataset) { delete dataset; }

grd_status grd_synthesize(const grd_config* config, grd_dataset** out) {
  if (config == nullptr || out == nullptr) {
    return invalid_arg("config and out must not be NULL");
  }
  return guarded([&] {
    *out = new grd_dataset{
        guardlab::synthesize_corpus(config->config.synth())};
  });
}

grd_status grd_reject_sample(const grd_config* config,
                             const grd_policy* policy,
                             const grd_dataset* dataset, grd_dataset** out) {
  if (config == nullptr || policy == nullptr || dataset == nullptr ||
      out == nullptr) {
    return invalid_arg("config, policy, dataset and out must not be NULL");
  }
  return guarded([&] {
    *out = new grd_dataset{guardlab::rejection_sample(
        policy->policy, dataset->dataset, config->config.rejection())};
  });
}

grd_status grd_augment(const grd_config* config, const grd_dataset* hard,
                       grd_dataset** out) {
  if (config == nullptr || hard == nullptr || out == nullptr) {
    return invalid_arg("config, hard and out must not be NULL");
  }
  return guarded([&] {
    *out = new grd_dataset{
        guardlab::augment(hard->dataset, config->config.augmentation())};
  });
}

grd_status grd_policy_create(const grd_config* config, grd_policy** out) {
  if (config == nullptr || out == nullptr) {
    return invalid_arg("config and out must not be NULL");
  }
  return guarded([&] {
    *out = new grd_policy{guardlab::ToyPolicy(config->config.policy())};
  });
}

grd_status grd_policy_load(const char* path, grd_policy** out) {
  if (path == nullptr || out == nullptr) {
    return invalid_arg("path and out must not be NULL");
  }
  return guarded([&] { *out = new grd_policy{guardlab::load_policy(path)}; });
}

grd_status grd_policy_save(const grd_policy* policy, const char* path) {
  if (policy == nullptr || path == nullptr) {
    return invalid_arg("policy and path must not be NULL");
  }
  return guarded([&] { guardlab::save_policy(policy->policy, path); });
}

void grd_policy_free(grd_policy* policy) { delete policy; }

grd_status grd_train_sft(const grd_config* config, grd_policy* policy,
                         const grd_dataset* data, const char* curves_csv_path) {
  if (config == nullptr || policy == nullptr || data == nullptr) {
    return invalid_arg("config, policy and data must not be NULL");
  }
  return guarded([&] {
    guardlab::Trainer trainer = make_trainer(config->config, policy->policy);
    trainer.run_sft(data->dataset,
                    static_cast<int>(config->config.get_int("sft.epochs")),
                    config->config.get_double("sft.lr"),
                    static_cast<int>(config->config.get_int("sft.batch_size")));
    if (curves_csv_path != nullptr) {
      guardlab::write_curves_csv(trainer.history(), curves_csv_path);
    }
  });
}

grd_status grd_train_rl(const grd_config* config, grd_policy* policy,
                        const grd_dataset* data, const char* curves_csv_path) {
  if (config == nullptr || policy == nullptr || data == nullptr) {
    return invalid_arg("config, policy and data must not be NULL");
  }
  return guarded([&] {
    guardlab::Trainer trainer = make_trainer(config->config, policy->policy);
    std::int64_t steps = config->config.get_int("trainer.steps");
    if (steps < 0) steps = config->config.get_int("trainer.s_total");
    trainer.run_rl(data->dataset, static_cast<int>(steps));
    if (curves_csv_path != nullptr) {
      guardlab::write_curves_csv(trainer.history(), curves_csv_path);
    }
  });
}

grd_status grd_evaluate_single(const grd_config* config,
                               const grd_policy* policy,
                               const char* data_jsonl_path, const char* name,
                               const char* task, const char* group,
                               const char* log_jsonl_path,
                               char** out_report_json) {
  if (config == nullptr || data_jsonl_path == nullptr || name == nullptr ||
      task == nullptr || group == nullptr) {
    return invalid_arg("config, data path, name, task and group must not be NULL");
  }
  grd_status status = GRD_OK;
  std::vector<guardlab::BenchmarkSpec> specs;
  status = guarded([&] {
    guardlab::BenchmarkSpec spec;
    spec.name = name;
    auto parsed_task = guardlab::parse_task(task);
    auto parsed_group = guardlab::parse_group(group);
    if (!parsed_task) {
      guardlab::fail(ErrorKind::kConfigError,
                     "task must be 'prompt' or 'response'");
    }
    if (!parsed_group) {
      guardlab::fail(ErrorKind::kConfigError,
                     "group must be 'text', 'image' or 'text_image'");
    }
    spec.task = *parsed_task;
    spec.group = *parsed_group;
    spec.data = guardlab::ingest(data_jsonl_path);
    specs.push_back(std::move(spec));
  });
  if (status != GRD_OK) return status;
  return evaluate_specs(config, policy, std::move(specs), log_jsonl_path,
                        out_report_json);
}

grd_status grd_evaluate_manifest(const grd_config* config,
                                 const grd_policy* policy,
                                 const char* manifest_json_path,
                                 const char* log_jsonl_path,
                                 char** out_report_json) {
  if (config == nullptr || manifest_json_path == nullptr) {
    return invalid_arg("config and manifest path must not be NULL");
  }
  grd_status status = GRD_OK;
  std::vector<guardlab::BenchmarkSpec> specs;
  status = guarded([&] {
    nlohmann::ordered_json manifest;
    try {
      manifest = nlohmann::ordered_json::parse(
          guardlab::read_file(manifest_json_path));
    } catch (const nlohmann::json::parse_error& e) {
      guardlab::fail(ErrorKind::kParseError,
                     std::string("invalid manifest JSON: ") + e.what());
    }
    if (!manifest.is_object() || !manifest.contains("benchmarks") ||
        !manifest["benchmarks"].is_array()) {
      guardlab::fail(ErrorKind::kParseError,
                     "manifest must carry a benchmarks array");
    }
    std::filesystem::path base =
        std::filesystem::path(manifest_json_path).parent_path();
    for (const auto& entry : manifest["benchmarks"]) {
      guardlab::BenchmarkSpec spec;
      spec.name = entry.at("name").get<std::string>();
      auto parsed_task =
          guardlab::parse_task(entry.at("task").get<std::string>());
      auto parsed_group =
          guardlab::parse_group(entry.at("group").get<std::string>());
      if (!parsed_task || !parsed_group) {
        guardlab::fail(ErrorKind::kParseError,
                       "bad task/group for benchmark " + spec.name);
      }
      spec.task = *parsed_task;
      spec.group = *parsed_group;
      std::filesystem::path data_path(entry.at("path").get<std::string>());
      if (data_path.is_relative()) data_path = base / data_path;
      spec.data = guardlab::ingest(data_path.string());
      specs.push_back(std::move(spec));
    }
  });
  if (status != GRD_OK) return status;
  return evaluate_specs(config, policy, std::move(specs), log_jsonl_path,
                        out_report_json);
}

grd_status grd_report_render(const char* report_json, char** out_text) {
  if (report_json == nullptr || out_text == nullptr) {
    return invalid_arg("report_json and out_text must not be NULL");
  }
  return guarded([&] {
    *out_text = dup_string(guardlab::render_report_table(
        guardlab::report_from_json(report_json)));
  });
}

grd_status grd_moderate(const grd_config* config, const grd_policy* policy,
                        const char* text, const char* image_path,
                        const char* response, char** out_text,
                        char** out_json) {
  if (config == nullptr) return invalid_arg("config must not be NULL");
  if (text == nullptr && image_path == nullptr) {
    return invalid_arg("moderation needs text and/or an image");
  }
  return guarded([&] {
    guardlab::Sample sample;
    sample.id = "moderate-input";
    sample.source = "cli";
    if (text != nullptr) sample.text = std::string(text);
    if (image_path != nullptr) {
      guardlab::ImageRef ref;
      ref.path = std::string(image_path);
      ref.image = guardlab::load_image_file(image_path);
      sample.image = std::move(ref);
    }
    if (response != nullptr) sample.response = std::string(response);
    sample.modality =
        sample.text.has_value()
            ? (sample.image.has_value() ? guardlab::Modality::kTextImage
                                        : guardlab::Modality::kText)
            : guardlab::Modality::kImage;

    guardlab::ReasoningOutput parsed =
        backend_for(config->config, policy)(sample);

    std::string pretty;
    if (parsed.reasoning.has_value() && !parsed.reasoning->empty()) {
      pretty += *parsed.reasoning;
      pretty += '\n';
    }
    if (!parsed.format_ok) {
      pretty += "[malformed guard output]\n";
    }
    pretty += "Request: ";
    pretty += parsed.predicted_prompt_label.has_value()
                  ? to_string(*parsed.predicted_prompt_label)
                  : "unknown";
    pretty += '\n';
    if (sample.has_response()) {
      pretty += "Response: ";
      pretty += parsed.predicted_response_label.has_value()
                    ? to_string(*parsed.predicted_response_label)
                    : "unknown";
      pretty += '\n';
    }

    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    obj["format_ok"] = parsed.format_ok;
    if (parsed.reasoning.has_value()) obj["reasoning"] = *parsed.reasoning;
    if (parsed.predicted_prompt_label.has_value()) {
      obj["prompt_label"] =
          std::string(to_string(*parsed.predicted_prompt_label));
    }
    if (parsed.predicted_response_label.has_value()) {
      obj["response_label"] =
          std::string(to_string(*parsed.predicted_response_label));
    }
    obj["reasoning_tokens"] = parsed.reasoning_token_count;
    obj["raw"] = parsed.raw;

    if (out_text != nullptr) *out_text = dup_string(pretty);
    if (out_json != nullptr) *out_json = dup_string(obj.dump(2));
  });
}

}  // extern "C"
