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

#ifndef GUARDLAB_CONFIG_HPP_
#define GUARDLAB_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "guardlab/pipeline.hpp"
#include "guardlab/policy.hpp"
#include "guardlab/remote.hpp"
#include "guardlab/reward.hpp"
#include "guardlab/trainer.hpp"

namespace guardlab {

// Flat key-value run configuration. Keys live in a fixed typed registry;
// unknown keys are rejected on load, set and override. Files use the flat
// TOML subset documented in the README ([section] headers, key = value,
// strings/ints/floats/bools, '#' comments).
class RunConfig {
 public:
  using Value = std::variant<bool, std::int64_t, double, std::string>;

  RunConfig();  // registry defaults

  static RunConfig load(const std::string& toml_path);
  void apply_toml(const std::string& content, const std::string& origin);

  // Sets a dotted key from its string spelling, validated against the
  // registry type. Throws ConfigError.
  void set(const std::string& key, const std::string& value);

  bool get_bool(const std::string& key) const;
  std::int64_t get_int(const std::string& key) const;
  double get_double(const std::string& key) const;  // int keys promote
  const std::string& get_string(const std::string& key) const;

  // Canonical TOML of the effective configuration (registry order).
  std::string dump_toml() const;

  // Stage seed: the stage's own key when >= 0, otherwise derived from
  // run.seed and the stage name.
  std::uint64_t stage_seed(const std::string& stage) const;

  int threads() const;

  // Typed projections consumed by the pipeline stages.
  RewardConfig reward() const;
  PolicyConfig policy() const;
  SyntheticSpec synth() const;
  AugmentationConfig augmentation() const;
  RejectionConfig rejection() const;
  TrainerConfig trainer() const;
  RemoteEndpoint remote() const;  // api key resolved from GUARD_API_KEY
  PromptTemplate prompt_template() const;

 private:
  const Value& lookup(const std::string& key) const;
  std::map<std::string, Value> values_;
};

}  // namespace guardlab

#endif  // GUARDLAB_CONFIG_HPP_
