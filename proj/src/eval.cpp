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

#include "guardlab/eval.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>

#include <json.hpp>

#include "guardlab/error.hpp"
#include "guardlab/fsutil.hpp"
#include "guardlab/parallel.hpp"

namespace guardlab {
namespace {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double f1_from_counts(const ConfusionCounts& c) {
  double denom = static_cast<double>(2 * c.tp + c.fp + c.fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(c.tp) / denom;
}

void tally(ConfusionCounts& counts, std::optional<Label> predicted, Label gold) {
  if (!predicted.has_value()) {
    counts.parse_failures += 1;
    predicted = Label::kUnharmful;
  }
  bool pred_pos = *predicted == Label::kHarmful;
  bool gold_pos = gold == Label::kHarmful;
  if (pred_pos && gold_pos) counts.tp += 1;
  else if (pred_pos && !gold_pos) counts.fp += 1;
  else if (!pred_pos && gold_pos) counts.fn += 1;
  else counts.tn += 1;
}

Label gold_of(const Sample& sample, TaskKind task) {
  if (task == TaskKind::kPrompt) return sample.prompt_label;
  return *sample.response_label;
}

void check_benchmark(const BenchmarkSpec& spec) {
  if (spec.task != TaskKind::kResponse) return;
  for (const Sample& s : spec.data.samples) {
    if (!s.response.has_value() || !s.response_label.has_value()) {
      fail(ErrorKind::kValidationFailed,
           "benchmark " + spec.name + ": sample " + s.id +
               " lacks a labeled response for the response task");
    }
  }
}

void finish_report(BenchmarkReport& report) {
  std::vector<std::pair<double, std::size_t>> text_results;
  std::vector<std::pair<double, std::size_t>> all_results;
  for (const BenchmarkResult& r : report.results) {
    all_results.emplace_back(r.f1, r.sample_count);
    if (r.group == ModalityGroup::kText) {
      text_results.emplace_back(r.f1, r.sample_count);
    }
  }
  if (!text_results.empty()) {
    report.average_text = weighted_average(text_results);
  }
  if (!all_results.empty()) {
    report.average_all = weighted_average(all_results);
  }
}

json result_to_json(const BenchmarkResult& r) {
  json obj = json::object();
  obj["name"] = r.name;
  obj["task"] = std::string(to_string(r.task));
  obj["group"] = std::string(to_string(r.group));
  obj["sample_count"] = r.sample_count;
  obj["tp"] = r.counts.tp;
  obj["fp"] = r.counts.fp;
  obj["fn"] = r.counts.fn;
  obj["tn"] = r.counts.tn;
  obj["parse_failures"] = r.counts.parse_failures;
  obj["f1"] = r.f1;
  return obj;
}

}  // namespace

std::string_view to_string(TaskKind task) {
  return task == TaskKind::kPrompt ? "prompt" : "response";
}

std::optional<TaskKind> parse_task(std::string_view text) {
  if (text == "prompt") return TaskKind::kPrompt;
  if (text == "response") return TaskKind::kResponse;
  return std::nullopt;
}

std::string_view to_string(ModalityGroup group) {
  switch (group) {
    case ModalityGroup::kText: return "text";
    case ModalityGroup::kImage: return "image";
    case ModalityGroup::kTextImage: return "text_image";
  }
  return "text";
}

std::optional<ModalityGroup> parse_group(std::string_view text) {
  if (text == "text") return ModalityGroup::kText;
  if (text == "image") return ModalityGroup::kImage;
  if (text == "text_image") return ModalityGroup::kTextImage;
  return std::nullopt;
}

F1Result f1_score(std::span<const std::optional<Label>> predictions,
                  std::span<const Label> golds) {
  if (predictions.size() != golds.size()) {
    fail(ErrorKind::kLengthMismatch,
         "predictions and golds differ in length");
  }
  if (predictions.empty()) fail(ErrorKind::kEmptyInput, "no predictions");
  F1Result result;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    tally(result.counts, predictions[i], golds[i]);
  }
  result.f1 = f1_from_counts(result.counts);
  return result;
}

double weighted_average(std::span<const std::pair<double, std::size_t>> results) {
  if (results.empty()) fail(ErrorKind::kEmptyInput, "no benchmark results");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& [f1, count] : results) {
    if (count == 0) fail(ErrorKind::kEmptyInput, "benchmark with zero samples");
    weighted += f1 * static_cast<double>(count);
    total += static_cast<double>(count);
  }
  return weighted / total;
}

Backend toy_backend(const ToyPolicy& policy) {
  return [&policy](const Sample& sample) {
    return parse_output(render_output(greedy_output(policy, sample)),
                        sample.has_response());
  };
}

BenchmarkReport evaluate(const Backend& backend,
                         std::span<const BenchmarkSpec> benchmarks,
                         int concurrency, std::vector<EvalRecord>* log) {
  BenchmarkReport report;
  for (const BenchmarkSpec& spec : benchmarks) {
    check_benchmark(spec);
    std::vector<EvalRecord> records(spec.data.samples.size());
    parallel_for(spec.data.samples.size(), concurrency, [&](std::size_t i) {
      const Sample& sample = spec.data.samples[i];
      EvalRecord& rec = records[i];
      rec.benchmark = spec.name;
      rec.sample_id = sample.id;
      rec.task = spec.task;
      rec.gold = gold_of(sample, spec.task);
      try {
        ReasoningOutput out = backend(sample);
        rec.format_ok = out.format_ok;
        rec.reasoning_tokens = out.reasoning_token_count;
        if (out.format_ok) {
          rec.predicted = spec.task == TaskKind::kPrompt
                              ? out.predicted_prompt_label
                              : out.predicted_response_label;
        }
      } catch (const Error& e) {
        rec.error = e.what();  // recorded as a parse failure, run continues
      }
    });

    BenchmarkResult result;
    result.name = spec.name;
    result.task = spec.task;
    result.group = spec.group;
    result.sample_count = spec.data.samples.size();
    for (const EvalRecord& rec : records) {
      tally(result.counts, rec.predicted, rec.gold);
    }
    result.f1 = f1_from_counts(result.counts);
    report.results.push_back(result);
    if (log != nullptr) {
      log->insert(log->end(), records.begin(), records.end());
    }
  }
  finish_report(report);
  return report;
}

BenchmarkReport report_from_records(std::span<const EvalRecord> records,
                                    std::span<const BenchmarkSpec> benchmarks) {
  BenchmarkReport report;
  for (const BenchmarkSpec& spec : benchmarks) {
    BenchmarkResult result;
    result.name = spec.name;
    result.task = spec.task;
    result.group = spec.group;
    for (const EvalRecord& rec : records) {
      if (rec.benchmark != spec.name || rec.task != spec.task) continue;
      result.sample_count += 1;
      tally(result.counts, rec.predicted, rec.gold);
    }
    result.f1 = f1_from_counts(result.counts);
    report.results.push_back(result);
  }
  finish_report(report);
  return report;
}

std::string report_to_json(const BenchmarkReport& report) {
  json obj = json::object();
  obj["results"] = json::array();
  for (const BenchmarkResult& r : report.results) {
    obj["results"].push_back(result_to_json(r));
  }
  if (report.average_text.has_value()) obj["average_text"] = *report.average_text;
  if (report.average_all.has_value()) obj["average_all"] = *report.average_all;
  return obj.dump(2);
}

BenchmarkReport report_from_json(const std::string& json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::kParseError, std::string("invalid report JSON: ") + e.what());
  }
  BenchmarkReport report;
  if (!obj.is_object() || !obj.contains("results") || !obj["results"].is_array()) {
    fail(ErrorKind::kParseError, "report JSON lacks a results array");
  }
  for (const json& r : obj["results"]) {
    BenchmarkResult result;
    result.name = r.at("name").get<std::string>();
    auto task = parse_task(r.at("task").get<std::string>());
    auto group = parse_group(r.at("group").get<std::string>());
    if (!task || !group) fail(ErrorKind::kParseError, "bad task/group in report");
    result.task = *task;
    result.group = *group;
    result.sample_count = r.at("sample_count").get<std::size_t>();
    result.counts.tp = r.at("tp").get<std::size_t>();
    result.counts.fp = r.at("fp").get<std::size_t>();
    result.counts.fn = r.at("fn").get<std::size_t>();
    result.counts.tn = r.at("tn").get<std::size_t>();
    result.counts.parse_failures = r.at("parse_failures").get<std::size_t>();
    result.f1 = r.at("f1").get<double>();
    report.results.push_back(result);
  }
  if (obj.contains("average_text")) report.average_text = obj["average_text"].get<double>();
  if (obj.contains("average_all")) report.average_all = obj["average_all"].get<double>();
  return report;
}

std::string render_report_table(const BenchmarkReport& report) {
  char line[256];
  std::string out;
  std::snprintf(line, sizeof(line), "%-24s %-9s %-11s %7s %6s %6s %6s %6s %6s %8s\n",
                "benchmark", "task", "group", "n", "tp", "fp", "fn", "tn",
                "unpar", "f1");
  out += line;
  out += std::string(std::strlen(line) - 1, '-') + "\n";
  for (const BenchmarkResult& r : report.results) {
    std::snprintf(line, sizeof(line),
                  "%-24s %-9s %-11s %7zu %6zu %6zu %6zu %6zu %6zu %8.4f\n",
                  r.name.c_str(), std::string(to_string(r.task)).c_str(),
                  std::string(to_string(r.group)).c_str(), r.sample_count,
                  r.counts.tp, r.counts.fp, r.counts.fn, r.counts.tn,
                  r.counts.parse_failures, r.f1);
    out += line;
  }
  if (report.average_text.has_value()) {
    std::snprintf(line, sizeof(line), "average (text): %.4f\n", *report.average_text);
    out += line;
  }
  if (report.average_all.has_value()) {
    std::snprintf(line, sizeof(line), "average (all):  %.4f\n", *report.average_all);
    out += line;
  }
  return out;
}

std::string eval_log_to_jsonl(std::span<const EvalRecord> records) {
  std::string out;
  for (const EvalRecord& rec : records) {
    json obj = json::object();
    obj["benchmark"] = rec.benchmark;
    obj["sample_id"] = rec.sample_id;
    obj["task"] = std::string(to_string(rec.task));
    obj["gold"] = std::string(to_string(rec.gold));
    if (rec.predicted.has_value()) {
      obj["predicted"] = std::string(to_string(*rec.predicted));
    }
    obj["format_ok"] = rec.format_ok;
    obj["reasoning_tokens"] = rec.reasoning_tokens;
    if (rec.error.has_value()) obj["error"] = *rec.error;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void write_curves_csv(std::span<const StepMetrics> history,
                      const std::string& path) {
  if (history.empty()) fail(ErrorKind::kEmptyInput, "empty metric history");
  std::string out = "step,mean_reward,mean_reasoning_tokens,loss,clip_bound\n";
  for (const StepMetrics& m : history) {
    out += std::to_string(m.step);
    out += ',';
    out += format_double(m.mean_reward);
    out += ',';
    out += format_double(m.mean_reasoning_tokens);
    out += ',';
    out += format_double(m.loss);
    out += ',';
    out += format_double(m.clip_bound);
    out += '\n';
  }
  atomic_write_file(path, out);
}

std::vector<StepMetrics> read_curves_csv(const std::string& path) {
  std::string content = read_file(path);
  std::vector<StepMetrics> history;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    std::string line = content.substr(
        pos, end == std::string::npos ? std::string::npos : end - pos);
    pos = end == std::string::npos ? content.size() : end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "step,mean_reward,mean_reasoning_tokens,loss,clip_bound") {
        fail(ErrorKind::kParseError, "unexpected curves CSV header");
      }
      continue;
    }
    StepMetrics m;
    char* cursor = line.data();
    char* next = nullptr;
    m.step = static_cast<int>(std::strtol(cursor, &next, 10));
    double* fields[4] = {&m.mean_reward, &m.mean_reasoning_tokens, &m.loss,
                         &m.clip_bound};
    for (double* field : fields) {
      if (next == nullptr || *next != ',') {
        fail(ErrorKind::kParseError,
             "malformed curves CSV at line " + std::to_string(line_no));
      }
      cursor = next + 1;
      *field = std::strtod(cursor, &next);
    }
    history.push_back(m);
  }
  return history;
}

}  // namespace guardlab
