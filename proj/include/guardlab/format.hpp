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

#ifndef GUARDLAB_FORMAT_HPP_
#define GUARDLAB_FORMAT_HPP_

#include <optional>
#include <string>

#include "guardlab/types.hpp"

namespace guardlab {

// Wire grammar shared by the trainer, the remote adapter and the eval
// harness. A well-formed guard output is
//
//   <think>...reasoning...</think>
//   <result>
//   Request: harmful|unharmful
//   Response: harmful|unharmful      (iff the prompt carried a response)
//   </result>
//
// Tags are case-sensitive literals and must each appear exactly once, in
// order. Verdict lines are matched case-insensitively and may appear in
// either order inside the result block; anything else inside the block (or a
// missing/extra verdict line) makes the output malformed. Text outside the
// two blocks is ignored.

struct PromptTemplate {
  std::string instruction;
  std::string user_header = "## User Input";
  std::string image_placeholder = "[image attached]";
  std::string response_header = "## AI Response";
};

// The built-in guardrail instruction (original prose, see README).
PromptTemplate default_template();

struct ReasoningOutput {
  std::string raw;
  std::optional<std::string> reasoning;
  std::optional<Label> predicted_prompt_label;
  std::optional<Label> predicted_response_label;
  bool format_ok = false;
  std::size_t reasoning_token_count = 0;
};

// Deterministic prompt for a sample: instruction, then the user input (text
// and/or image placeholder), then the response section iff present.
std::string render_prompt(const PromptTemplate& tmpl, const Sample& sample);

ReasoningOutput parse_output(std::string raw, bool expects_response);

// Serializes the gold training target for a sample (reasoning steps joined
// by newlines inside the think block, gold verdicts in the result block).
// Round-trips through parse_output. Requires gold reasoning.
std::string render_target(const Sample& sample);

}  // namespace guardlab

#endif  // GUARDLAB_FORMAT_HPP_
