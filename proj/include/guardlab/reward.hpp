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

#ifndef GUARDLAB_REWARD_HPP_
#define GUARDLAB_REWARD_HPP_

#include <cstddef>
#include <optional>

#include "guardlab/format.hpp"
#include "guardlab/types.hpp"

namespace guardlab {

struct RewardConfig {
  // Length cut-off in (0,1]: the squared length divisor saturates at beta.
  double beta = 1.0;
  // Normalization constant for l_norm; also the reasoning budget the toy
  // policy's length buckets span.
  int max_reasoning_tokens = 1024;

  double min_norm_length() const { return 1.0 / max_reasoning_tokens; }
  void validate() const;  // throws ConfigError
};

struct SafetyScore {
  int format_indicator = 0;  // 1 iff the output matched the wire grammar
  int r_prompt = 0;
  int r_response = 0;
  double r_safety = 0.0;
};

// r_safety = format * (0.5*prompt + 0.5*response); for prompt-only tasks the
// response term is dropped and the prompt term carries full weight.
SafetyScore safety_reward(const ReasoningOutput& parsed, Label gold_prompt,
                          std::optional<Label> gold_response);

// token_count / max tokens, clamped to [1/max_tokens, 1].
double normalized_length(std::size_t token_count, const RewardConfig& config);

// (-1 + r_safety) / min(l_norm, beta)^2. Always <= 0; 0 iff r_safety = 1.
double length_aware_reward(double r_safety, std::size_t token_count,
                           const RewardConfig& config);

struct RewardBreakdown {
  int format_indicator = 0;
  int r_prompt = 0;
  int r_response = 0;
  double r_safety = 0.0;
  double l_norm = 0.0;
  double final_reward = 0.0;
};

RewardBreakdown score_output(const ReasoningOutput& parsed, Label gold_prompt,
                             std::optional<Label> gold_response,
                             const RewardConfig& config);

}  // namespace guardlab

#endif  // GUARDLAB_REWARD_HPP_
