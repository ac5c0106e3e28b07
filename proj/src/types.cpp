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

#include "guardlab/types.hpp"

#include <filesystem>
#include <unordered_set>

#include "guardlab/error.hpp"
#include "guardlab/fsutil.hpp"
#include "guardlab/tokenize.hpp"

namespace guardlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "Io";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kModalityMismatch: return "ModalityMismatch";
    case ErrorKind::kOrphanResponseLabel: return "OrphanResponseLabel";
    case ErrorKind::kMissingResponseLabel: return "MissingResponseLabel";
    case ErrorKind::kBadImage: return "BadImage";
    case ErrorKind::kValidationFailed: return "ValidationFailed";
    case ErrorKind::kInsufficientSamples: return "InsufficientSamples";
    case ErrorKind::kTaskMismatch: return "TaskMismatch";
    case ErrorKind::kGroupTooSmall: return "GroupTooSmall";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kStepOutOfRange: return "StepOutOfRange";
    case ErrorKind::kStateError: return "StateError";
    case ErrorKind::kTransport: return "Transport";
    case ErrorKind::kTimeout: return "Timeout";
  }
  return "UnknownError";
}

std::string_view to_string(Label label) {
  return label == Label::kHarmful ? "harmful" : "unharmful";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "harmful") return Label::kHarmful;
  if (text == "unharmful") return Label::kUnharmful;
  return std::nullopt;
}

std::string_view to_string(Modality modality) {
  switch (modality) {
    case Modality::kText: return "text";
    case Modality::kImage: return "image";
    case Modality::kTextImage: return "text_image";
  }
  return "text";
}

std::optional<Modality> parse_modality(std::string_view text) {
  if (text == "text") return Modality::kText;
  if (text == "image") return Modality::kImage;
  if (text == "text_image") return Modality::kTextImage;
  return std::nullopt;
}

const Sample& validate_sample(const Sample& sample) {
  if (sample.id.empty()) {
    fail(ErrorKind::kValidationFailed, "sample id must be non-empty");
  }
  bool has_text = sample.text.has_value();
  bool has_image = sample.image.has_value();
  switch (sample.modality) {
    case Modality::kText:
      if (!has_text || has_image) {
        fail(ErrorKind::kModalityMismatch,
             "modality=text requires text content and no image (id=" +
                 sample.id + ")");
      }
      break;
    case Modality::kImage:
      if (!has_image || has_text) {
        fail(ErrorKind::kModalityMismatch,
             "modality=image requires image content and no text (id=" +
                 sample.id + ")");
      }
      break;
    case Modality::kTextImage:
      if (!has_text || !has_image) {
        fail(ErrorKind::kModalityMismatch,
             "modality=text_image requires both text and image (id=" +
                 sample.id + ")");
      }
      break;
  }
  if (sample.response_label.has_value() && !sample.response.has_value()) {
    fail(ErrorKind::kOrphanResponseLabel,
         "response_label without response (id=" + sample.id + ")");
  }
  if (sample.response.has_value() && !sample.response_label.has_value()) {
    fail(ErrorKind::kMissingResponseLabel,
         "response without response_label (id=" + sample.id + ")");
  }
  if (has_image) {
    const ImageRef& ref = *sample.image;
    if (ref.path.has_value() == ref.b64.has_value()) {
      fail(ErrorKind::kBadImage,
           "image must carry exactly one of path or b64 (id=" + sample.id + ")");
    }
    if (ref.loaded()) {
      if (ref.image.pixels.size() !=
          static_cast<std::size_t>(ref.image.width) * ref.image.height) {
        fail(ErrorKind::kBadImage, "inconsistent raster (id=" + sample.id + ")");
      }
    } else if (ref.b64.has_value()) {
      decode_pgm(base64_decode(*ref.b64));  // decodability check only
    } else {
      decode_pgm(read_file(*ref.path));
    }
  }
  if (sample.reasoning.has_value() && sample.reasoning->empty()) {
    fail(ErrorKind::kValidationFailed,
         "reasoning present but empty (id=" + sample.id + ")");
  }
  if (sample.parents.has_value()) {
    for (const std::string& p : *sample.parents) {
      if (p.empty()) {
        fail(ErrorKind::kValidationFailed,
             "empty parent id (id=" + sample.id + ")");
      }
    }
  }
  return sample;
}

void validate_dataset(const Dataset& dataset) {
  std::vector<std::string> problems;
  std::unordered_set<std::string> seen;
  for (const Sample& s : dataset.samples) {
    if (!seen.insert(s.id).second) {
      problems.push_back("id=" + s.id + ": duplicate id");
    }
    try {
      validate_sample(s);
    } catch (const Error& e) {
      problems.push_back("id=" + s.id + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string message = std::to_string(problems.size()) + " invalid sample(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i > 0) message += "; ";
      message += problems[i];
    }
    fail(ErrorKind::kValidationFailed, message);
  }
}

namespace {

void account(ModalityStats& stats, const Sample& sample) {
  stats.sample_count += 1;
  if (!sample.reasoning.has_value()) return;
  stats.reasoning_samples += 1;
  stats.reasoning_steps += sample.reasoning->size();
  for (const std::string& step : *sample.reasoning) {
    stats.reasoning_chars += utf8_length(step);
  }
}

void finish(ModalityStats& stats) {
  if (stats.reasoning_samples > 0) {
    stats.mean_steps_per_sample = static_cast<double>(stats.reasoning_steps) /
                                  static_cast<double>(stats.reasoning_samples);
  }
  if (stats.reasoning_steps > 0) {
    stats.mean_chars_per_step = static_cast<double>(stats.reasoning_chars) /
                                static_cast<double>(stats.reasoning_steps);
  }
}

}  // namespace

DatasetStats dataset_stats(const Dataset& dataset) {
  DatasetStats stats;
  for (const Sample& s : dataset.samples) {
    account(stats.overall, s);
    switch (s.modality) {
      case Modality::kText: account(stats.text, s); break;
      case Modality::kImage: account(stats.image, s); break;
      case Modality::kTextImage: account(stats.text_image, s); break;
    }
  }
  finish(stats.text);
  finish(stats.image);
  finish(stats.text_image);
  finish(stats.overall);
  return stats;
}

void load_sample_image(Sample& sample, const std::string& base_dir) {
  if (!sample.image.has_value() || sample.image->loaded()) return;
  ImageRef& ref = *sample.image;
  if (ref.b64.has_value()) {
    ref.image = decode_pgm(base64_decode(*ref.b64));
    return;
  }
  if (!ref.path.has_value()) {
    fail(ErrorKind::kBadImage, "image ref carries neither path nor b64 (id=" +
                                   sample.id + ")");
  }
  std::filesystem::path p(*ref.path);
  if (p.is_relative() && !base_dir.empty()) {
    p = std::filesystem::path(base_dir) / p;
  }
  ref.image = load_image_file(p.string());
}

}  // namespace guardlab
