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

#ifndef GUARDLAB_TYPES_HPP_
#define GUARDLAB_TYPES_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "guardlab/image.hpp"

namespace guardlab {

// The moderation label space. The external encoding is the lowercase string;
// nothing else is accepted.
enum class Label { kHarmful, kUnharmful };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

enum class Modality { kText, kImage, kTextImage };

std::string_view to_string(Modality modality);
std::optional<Modality> parse_modality(std::string_view text);

// Image content of a sample: exactly one of a file path or an inline base64
// payload, plus the decoded raster once loaded.
struct ImageRef {
  std::optional<std::string> path;
  std::optional<std::string> b64;
  Image image;  // decoded pixels; width/height filled on load

  bool loaded() const { return !image.empty(); }
};

// One moderation instance. Immutable by convention once validated; all
// pipeline stages copy rather than mutate.
struct Sample {
  std::string id;
  Modality modality = Modality::kText;
  std::optional<std::string> text;
  std::optional<ImageRef> image;
  std::optional<std::string> response;
  Label prompt_label = Label::kUnharmful;
  std::optional<Label> response_label;
  std::optional<std::vector<std::string>> reasoning;
  std::string source;
  std::optional<std::array<std::string, 2>> parents;

  bool has_response() const { return response.has_value(); }
};

struct Dataset {
  std::string name;
  std::vector<Sample> samples;
};

struct ModalityStats {
  std::size_t sample_count = 0;
  std::size_t reasoning_samples = 0;
  std::size_t reasoning_steps = 0;
  std::size_t reasoning_chars = 0;
  // Means are present only when at least one sample carries reasoning.
  std::optional<double> mean_steps_per_sample;
  std::optional<double> mean_chars_per_step;
};

struct DatasetStats {
  ModalityStats text;
  ModalityStats image;
  ModalityStats text_image;
  ModalityStats overall;
};

// Checks every Sample invariant; returns its argument unchanged on success.
// Throws Error with kind ModalityMismatch, OrphanResponseLabel,
// MissingResponseLabel, BadImage or ValidationFailed.
const Sample& validate_sample(const Sample& sample);

// Validates all samples plus dataset-level invariants (unique ids),
// aggregating per-sample failures into one ValidationFailed error.
void validate_dataset(const Dataset& dataset);

DatasetStats dataset_stats(const Dataset& dataset);

// Decodes the sample's image payload (path resolved against base_dir when
// relative) and fills ImageRef::image. No-op for samples without images.
void load_sample_image(Sample& sample, const std::string& base_dir);

}  // namespace guardlab

#endif  // GUARDLAB_TYPES_HPP_
