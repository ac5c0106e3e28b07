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

#ifndef GUARDLAB_EVAL_HPP_
#define GUARDLAB_EVAL_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "guardlab/format.hpp"
#include "guardlab/policy.hpp"
#include "guardlab/trainer.hpp"
#include "guardlab/types.hpp"

namespace guardlab {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t parse_failures = 0;
};

struct F1Result {
  ConfusionCounts counts;
  double f1 = 0.0;
};

// F1 with harmful as the positive class: 2TP / (2TP + FP + FN), defined as 0
// when the denominator is 0. Unparsed predictions (nullopt) count as
// predicted-unharmful and are tallied in parse_failures.
F1Result f1_score(std::span<const std::optional<Label>> predictions,
                  std::span<const Label> golds);

// Sample-weighted mean of (f1, sample_count) pairs.
double weighted_average(std::span<const std::pair<double, std::size_t>> results);

enum class TaskKind { kPrompt, kResponse };
enum class ModalityGroup { kText, kImage, kTextImage };

std::string_view to_string(TaskKind task);
std::optional<TaskKind> parse_task(std::string_view text);
std::string_view to_string(ModalityGroup group);
std::optional<ModalityGroup> parse_group(std::string_view text);

struct BenchmarkSpec {
  std::string name;
  TaskKind task = TaskKind::kPrompt;
  ModalityGroup group = ModalityGroup::kText;
  Dataset data;
};

struct BenchmarkResult {
  std::string name;
  TaskKind task = TaskKind::kPrompt;
  ModalityGroup group = ModalityGroup::kText;
  std::size_t sample_count = 0;
  ConfusionCounts counts;
  double f1 = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkResult> results;
  std::optional<double> average_text;  // over text-modality benchmarks
  std::optional<double> average_all;
};

// The raw per-sample evaluation log; every aggregate in the report can be
// recomputed from these records alone.
struct EvalRecord {
  std::string benchmark;
  std::string sample_id;
  TaskKind task = TaskKind::kPrompt;
  Label gold = Label::kUnharmful;
  std::optional<Label> predicted;
  bool format_ok = false;
  std::size_t reasoning_tokens = 0;
  std::optional<std::string> error;  // transport failures, recorded not fatal
};

// A moderation backend maps a sample to a parsed guard output. May throw
// Error (e.g. Transport); evaluate() records such failures per sample.
using Backend = std::function<ReasoningOutput(const Sample&)>;

// Greedy (argmax) decoding of the toy policy.
Backend toy_backend(const ToyPolicy& policy);

BenchmarkReport evaluate(const Backend& backend,
                         std::span<const BenchmarkSpec> benchmarks,
                         int concurrency, std::vector<EvalRecord>* log);

// Recomputes a report from per-sample records (the audit path).
BenchmarkReport report_from_records(std::span<const EvalRecord> records,
                                    std::span<const BenchmarkSpec> benchmarks);

std::string report_to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const std::string& json_text);
std::string render_report_table(const BenchmarkReport& report);

std::string eval_log_to_jsonl(std::span<const EvalRecord> records);

// Training-curve export: CSV with header
// step,mean_reward,mean_reasoning_tokens,loss,clip_bound. Values round-trip
// bit-exact through read_curves_csv.
void write_curves_csv(std::span<const StepMetrics> history,
                      const std::string& path);
std::vector<StepMetrics> read_curves_csv(const std::string& path);

}  // namespace guardlab

#endif  // GUARDLAB_EVAL_HPP_
