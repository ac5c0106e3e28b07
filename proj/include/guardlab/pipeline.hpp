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

#ifndef GUARDLAB_PIPELINE_HPP_
#define GUARDLAB_PIPELINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "guardlab/image.hpp"
#include "guardlab/policy.hpp"
#include "guardlab/types.hpp"

namespace guardlab {

// Reads a JSONL dataset file, decodes images (paths resolved relative to the
// file) and validates every sample. ParseError carries the line number;
// validation problems are aggregated with sample ids.
Dataset ingest(const std::string& path);

// Spec of the seeded synthetic corpus. A sample is harmful iff its text
// carries a token from the trigger lexicon or its image carries the trigger
// pixel block; everything is deterministic under the seed.
struct SyntheticSpec {
  int n_samples = 1000;
  double mix_text = 0.5;
  double mix_image = 0.25;
  double mix_text_image = 0.25;
  double harmful_ratio = 0.5;
  double response_fraction = 0.5;
  std::vector<std::string> trigger_lexicon = {"redmercury", "blackice",
                                              "hexfume", "novacell",
                                              "pyrolith"};
  int image_size = 32;
  int trigger_block_size = 8;
  std::uint8_t trigger_block_value = 255;
  std::uint64_t seed = 1;

  void validate() const;  // mix sums to 1 +- 1e-9, lexicon non-empty, ...
};

Dataset synthesize_corpus(const SyntheticSpec& spec);

struct AugmentationConfig {
  double target_fraction = 0.20;  // share of augmented samples in the output
  std::string text_separator = "\n";
  MergeMode image_merge_mode = MergeMode::kHorizontal;
  std::uint64_t seed = 1;

  void validate() const;
};

// Safety-aware concatenation of two samples: texts joined by the separator,
// images merged pixel-level, and each label harmful iff either parent's
// label is harmful. The child records both parent ids.
Sample concat_samples(const Sample& a, const Sample& b,
                      const AugmentationConfig& config);

// hard plus freshly concatenated pairs; new samples make up target_fraction
// of the output (rounded down), paired uniformly at random under the seed.
Dataset augment(const Dataset& hard, const AugmentationConfig& config);

struct RejectionConfig {
  int k = 4;
  double temperature = 1.0;
  double top_p = 0.95;
  std::uint64_t seed = 1;
  int threads = 0;
};

// Keeps exactly the samples for which all k sampled outputs scored incorrect
// (r_safety < 1). Per-sample seeds derive from (seed, sample id), so the
// result is independent of dataset order and scheduling.
Dataset rejection_sample(const ToyPolicy& policy, const Dataset& dataset,
                         const RejectionConfig& config);

}  // namespace guardlab

#endif  // GUARDLAB_PIPELINE_HPP_
