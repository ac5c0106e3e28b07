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

#ifndef GUARDLAB_POLICY_HPP_
#define GUARDLAB_POLICY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "guardlab/rng.hpp"
#include "guardlab/types.hpp"

namespace guardlab {

struct PolicyConfig {
  int feature_dim = 1024;
  int length_buckets = 8;
  int max_reasoning_tokens = 1024;  // the bucket grid spans [0, this]

  void validate() const;
};

// Dense hashed features: prompt-text tokens, response tokens and the 64-bin
// image histogram are signed-hashed into the same space under distinct field
// prefixes, so the heads can tell a trigger in the prompt from one in the
// response.
using FeatureVector = std::vector<double>;

FeatureVector featurize(const Sample& sample, int feature_dim);

// One linear head: logits = W x + b, stored row-major per class with the
// bias as the trailing column.
struct LinearHead {
  int num_classes = 0;
  int input_dim = 0;
  std::vector<double> weights;  // num_classes * (input_dim + 1)

  void init(int classes, int dim) {
    num_classes = classes;
    input_dim = dim;
    weights.assign(static_cast<std::size_t>(classes) * (dim + 1), 0.0);
  }
  std::span<double> row(int c) {
    return {weights.data() + static_cast<std::size_t>(c) * (input_dim + 1),
            static_cast<std::size_t>(input_dim + 1)};
  }
  std::span<const double> row(int c) const {
    return {weights.data() + static_cast<std::size_t>(c) * (input_dim + 1),
            static_cast<std::size_t>(input_dim + 1)};
  }
};

std::vector<double> head_logits(const LinearHead& head, const FeatureVector& x);

// Factorized guard policy: length bucket x prompt label x response label,
// each an independent categorical over shared features. Zero-initialized
// parameters give uniform distributions.
struct ToyPolicy {
  PolicyConfig config;
  LinearHead length_head;
  LinearHead prompt_head;
  LinearHead response_head;

  ToyPolicy() : ToyPolicy(PolicyConfig{}) {}
  explicit ToyPolicy(const PolicyConfig& cfg);

  std::size_t param_count() const;
  double* param_data(std::size_t index);  // flat view across the three heads
  const double* param_data(std::size_t index) const;
};

// Gradient with the same flat layout as ToyPolicy parameters.
struct PolicyGrad {
  std::vector<double> values;

  explicit PolicyGrad(const ToyPolicy& policy)
      : values(policy.param_count(), 0.0) {}
  void zero() { values.assign(values.size(), 0.0); }
};

// Nominal reasoning-token length of a bucket (bucket centers over
// [0, max_reasoning_tokens]) and the inverse mapping.
int bucket_token_length(int bucket, const PolicyConfig& config);
int bucket_of_token_count(std::size_t tokens, const PolicyConfig& config);

struct PolicyOutput {
  int length_bucket = 0;
  Label prompt_label = Label::kUnharmful;
  std::optional<Label> response_label;
  std::size_t reasoning_tokens = 0;  // nominal length of the bucket
  double log_prob = 0.0;             // at temperature 1 under the acting policy
};

// Tag-grammar string with templated reasoning filler of exactly
// output.reasoning_tokens tokens. Always parses with format_ok = true.
std::string render_output(const PolicyOutput& output);

// Samples each head from its temperature-scaled softmax (optionally
// truncated to the top_p nucleus); log_prob is reported at temperature 1.
PolicyOutput act(const ToyPolicy& policy, const Sample& sample,
                 double temperature, std::uint64_t seed, double top_p = 1.0);

// G draws that share one featurization/logit pass.
std::vector<PolicyOutput> act_group(const ToyPolicy& policy, const Sample& sample,
                                    int group_size, double temperature, Rng& rng,
                                    double top_p = 1.0);

// Deterministic argmax decode used for evaluation.
PolicyOutput greedy_output(const ToyPolicy& policy, const Sample& sample);

// Exact log-probability of an output at temperature 1. Throws TaskMismatch
// when the output's response slot disagrees with the sample's task set.
double log_prob(const ToyPolicy& policy, const Sample& sample,
                const PolicyOutput& output);

// Analytical gradient of log_prob with respect to every parameter; heads not
// engaged by the sample get exactly zero.
PolicyGrad grad_log_prob(const ToyPolicy& policy, const Sample& sample,
                         const PolicyOutput& output);

// Versioned little-endian binary snapshot with a magic header.
void save_policy(const ToyPolicy& policy, const std::string& path);
ToyPolicy load_policy(const std::string& path);

}  // namespace guardlab

#endif  // GUARDLAB_POLICY_HPP_
