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

#include "guardlab/reward.hpp"

#include <algorithm>

#include "guardlab/error.hpp"

namespace guardlab {

void RewardConfig::validate() const {
  if (!(beta > 0.0) || beta > 1.0) {
    fail(ErrorKind::kConfigError, "reward.beta must be in (0,1]");
  }
  if (max_reasoning_tokens < 1) {
    fail(ErrorKind::kConfigError, "reward.max_reasoning_tokens must be >= 1");
  }
}

SafetyScore safety_reward(const ReasoningOutput& parsed, Label gold_prompt,
                          std::optional<Label> gold_response) {
  SafetyScore score;
  score.format_indicator = parsed.format_ok ? 1 : 0;
  score.r_prompt = (parsed.predicted_prompt_label.has_value() &&
                    *parsed.predicted_prompt_label == gold_prompt)
                       ? 1
                       : 0;
  if (gold_response.has_value()) {
    score.r_response = (parsed.predicted_response_label.has_value() &&
                        *parsed.predicted_response_label == *gold_response)
                           ? 1
                           : 0;
    score.r_safety = score.format_indicator *
                     (0.5 * score.r_prompt + 0.5 * score.r_response);
  } else {
    score.r_response = 0;
    score.r_safety = static_cast<double>(score.format_indicator * score.r_prompt);
  }
  return score;
}

double normalized_length(std::size_t token_count, const RewardConfig& config) {
  double l = static_cast<double>(token_count) /
             static_cast<double>(config.max_reasoning_tokens);
  return std::clamp(l, config.min_norm_length(), 1.0);
}

double length_aware_reward(double r_safety, std::size_t token_count,
                           const RewardConfig& config) {
  double l = std::min(normalized_length(token_count, config), config.beta);
  return (-1.0 + r_safety) / (l * l);
}

RewardBreakdown score_output(const ReasoningOutput& parsed, Label gold_prompt,
                             std::optional<Label> gold_response,
                             const RewardConfig& config) {
  SafetyScore s = safety_reward(parsed, gold_prompt, gold_response);
  RewardBreakdown breakdown;
  breakdown.format_indicator = s.format_indicator;
  breakdown.r_prompt = s.r_prompt;
  breakdown.r_response = s.r_response;
  breakdown.r_safety = s.r_safety;
  breakdown.l_norm = normalized_length(parsed.reasoning_token_count, config);
  breakdown.final_reward =
      length_aware_reward(s.r_safety, parsed.reasoning_token_count, config);
  return breakdown;
}

}  // namespace guardlab
