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

#include "guardlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unordered_set>

#include "guardlab/dataset_io.hpp"
#include "guardlab/error.hpp"
#include "guardlab/format.hpp"
#include "guardlab/parallel.hpp"
#include "guardlab/reward.hpp"
#include "guardlab/rng.hpp"
#include "guardlab/tokenize.hpp"

namespace guardlab {
namespace {

// Benign vocabulary; deliberately disjoint from the default trigger lexicon.
constexpr const char* kWords[] = {
    "please",    "summarize", "the",       "report",    "about",
    "garden",    "tools",     "weather",   "patterns",  "travel",
    "plans",     "recipe",    "ideas",     "history",   "of",
    "bridges",   "music",     "theory",    "notes",     "budget",
    "review",    "meeting",   "agenda",    "photo",     "album",
    "layout",    "science",   "fair",      "project",   "library",
    "catalog",   "search",    "bicycle",   "maintenance", "guide",
    "language",  "learning",  "tips",      "cooking",   "class",
    "schedule",  "home",      "office",    "setup",     "painting",
    "techniques", "overview", "star",      "charts",    "map",
    "details",   "city",      "park",      "events",    "volunteer",
    "signup",    "forms",     "newsletter", "draft",    "morning",
    "routine",   "checklist", "question",  "answer",    "update"};
constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);

std::string benign_sentence(Rng& rng) {
  std::size_t n = 5 + rng.next_index(6);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) out += ' ';
    out += kWords[rng.next_index(kWordCount)];
  }
  out += '.';
  return out;
}

bool contains_trigger_token(const std::string& text,
                            const std::vector<std::string>& lexicon) {
  for (std::string_view tok : tokenize(text)) {
    for (const std::string& t : lexicon) {
      if (tok == t) return true;
    }
  }
  return false;
}

// One or two benign sentences; for harmful text a trigger token is spliced in
// at a random word boundary and returned via chosen_trigger. Benign text is
// guaranteed trigger-free at token level even if the configured lexicon
// overlaps the benign vocabulary.
std::string make_text(Rng& rng, const std::vector<std::string>& lexicon,
                      bool harmful, std::string* chosen_trigger) {
  std::string text;
  for (int attempt = 0; attempt < 64; ++attempt) {
    text = benign_sentence(rng);
    if (rng.next_double() < 0.5) {
      text += ' ';
      text += benign_sentence(rng);
    }
    if (!contains_trigger_token(text, lexicon)) break;
  }
  if (!harmful) return text;
  const std::string& trigger = lexicon[rng.next_index(lexicon.size())];
  if (chosen_trigger != nullptr) *chosen_trigger = trigger;
  std::vector<std::size_t> spaces;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ' ') spaces.push_back(i);
  }
  if (spaces.empty()) return text + ' ' + trigger;
  std::size_t at = spaces[rng.next_index(spaces.size())];
  return text.substr(0, at) + ' ' + trigger + text.substr(at);
}

Image make_synthetic_image(Rng& rng, const SyntheticSpec& spec, bool harmful) {
  Image img = make_image(spec.image_size, spec.image_size, 0);
  for (std::uint8_t& p : img.pixels) {
    p = static_cast<std::uint8_t>(rng.next_index(240));  // benign band 0..239
  }
  if (harmful) {
    int span = spec.image_size - spec.trigger_block_size;
    int x0 = static_cast<int>(rng.next_index(static_cast<std::size_t>(span) + 1));
    int y0 = static_cast<int>(rng.next_index(static_cast<std::size_t>(span) + 1));
    for (int y = 0; y < spec.trigger_block_size; ++y) {
      for (int x = 0; x < spec.trigger_block_size; ++x) {
        img.at(x0 + x, y0 + y) = spec.trigger_block_value;
      }
    }
  }
  return img;
}

std::vector<std::string> make_reasoning(Rng& rng, const Sample& sample,
                                        const std::string& text_trigger,
                                        bool image_trigger,
                                        const std::string& response_trigger) {
  std::vector<std::string> lines;
  bool has_image = sample.image.has_value();
  lines.push_back(has_image
                      ? "reviewed the user text and image for risk markers."
                      : "reviewed the user input for risk markers.");
  if (!text_trigger.empty()) {
    lines.push_back("found the marker '" + text_trigger + "' in the user text.");
  }
  if (image_trigger) {
    lines.push_back("found a saturated marker block in the image.");
  }
  if (text_trigger.empty() && !image_trigger) {
    lines.push_back("found no risk markers in the user content.");
  }
  if (sample.has_response()) {
    lines.push_back(response_trigger.empty()
                        ? "the reply raises no concerns."
                        : "the reply contains the marker '" + response_trigger +
                              "'.");
  }
  std::size_t filler = rng.next_index(3);
  for (std::size_t i = 0; i < filler; ++i) {
    lines.push_back("cross-checked segment " + std::to_string(i + 1) +
                    " against the marker list.");
  }
  lines.push_back("settled the verdicts for the covered tasks.");
  std::vector<std::string> steps;
  steps.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    steps.push_back("Step " + std::to_string(i + 1) + ": " + lines[i]);
  }
  return steps;
}

ImageRef image_ref_from(const Image& img) {
  ImageRef ref;
  ref.b64 = base64_encode(encode_pgm(img));
  ref.image = img;
  return ref;
}

const Image& loaded_image(const Sample& s) {
  if (!s.image.has_value() || !s.image->loaded()) {
    fail(ErrorKind::kStateError,
         "sample image is not decoded (id=" + s.id + ")");
  }
  return s.image->image;
}

}  // namespace

Dataset ingest(const std::string& path) {
  Dataset dataset = read_jsonl_file(path);
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  std::vector<std::string> problems;
  std::unordered_set<std::string> seen;
  for (Sample& s : dataset.samples) {
    if (!seen.insert(s.id).second) {
      problems.push_back("id=" + s.id + ": duplicate id");
      continue;
    }
    try {
      load_sample_image(s, base_dir);
      validate_sample(s);
    } catch (const Error& e) {
      problems.push_back("id=" + s.id + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string message =
        std::to_string(problems.size()) + " invalid sample(s): ";
    for (std::size_t i = 0; i < problems.size(); ++i) {
      if (i > 0) message += "; ";
      message += problems[i];
    }
    fail(ErrorKind::kValidationFailed, message);
  }
  return dataset;
}

void SyntheticSpec::validate() const {
  if (n_samples < 0) fail(ErrorKind::kConfigError, "synth.n_samples must be >= 0");
  double mix = mix_text + mix_image + mix_text_image;
  if (std::abs(mix - 1.0) > 1e-9) {
    fail(ErrorKind::kConfigError, "synth modality mix must sum to 1");
  }
  if (mix_text < 0 || mix_image < 0 || mix_text_image < 0) {
    fail(ErrorKind::kConfigError, "synth modality mix fractions must be >= 0");
  }
  if (harmful_ratio < 0 || harmful_ratio > 1) {
    fail(ErrorKind::kConfigError, "synth.harmful_ratio must be in [0,1]");
  }
  if (response_fraction < 0 || response_fraction > 1) {
    fail(ErrorKind::kConfigError, "synth.response_fraction must be in [0,1]");
  }
  if (trigger_lexicon.empty()) {
    fail(ErrorKind::kConfigError, "trigger lexicon must be non-empty");
  }
  for (const std::string& t : trigger_lexicon) {
    if (t.empty()) fail(ErrorKind::kConfigError, "empty trigger token");
  }
  if (image_size < 1) fail(ErrorKind::kConfigError, "synth.image_size must be >= 1");
  if (trigger_block_size < 1 || trigger_block_size > image_size) {
    fail(ErrorKind::kConfigError,
         "trigger block must fit inside the synthetic image");
  }
}

Dataset synthesize_corpus(const SyntheticSpec& spec) {
  spec.validate();
  Dataset out;
  out.name = "synthetic";
  out.samples.reserve(static_cast<std::size_t>(spec.n_samples));
  Rng rng(spec.seed);

  for (int i = 0; i < spec.n_samples; ++i) {
    Sample s;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06d", i + 1);
    s.id = id;
    s.source = "synthetic";

    double m = rng.next_double();
    if (m < spec.mix_text) {
      s.modality = Modality::kText;
    } else if (m < spec.mix_text + spec.mix_image) {
      s.modality = Modality::kImage;
    } else {
      s.modality = Modality::kTextImage;
    }

    bool harmful = rng.next_double() < spec.harmful_ratio;
    bool plant_text = false;
    bool plant_image = false;
    if (harmful) {
      switch (s.modality) {
        case Modality::kText: plant_text = true; break;
        case Modality::kImage: plant_image = true; break;
        case Modality::kTextImage: {
          double where = rng.next_double();
          plant_text = where < 2.0 / 3.0;
          plant_image = where >= 1.0 / 3.0;
          break;
        }
      }
    }

    std::string text_trigger;
    if (s.modality != Modality::kImage) {
      s.text = make_text(rng, spec.trigger_lexicon, plant_text, &text_trigger);
    }
    if (s.modality != Modality::kText) {
      s.image = image_ref_from(make_synthetic_image(rng, spec, plant_image));
    }
    s.prompt_label = harmful ? Label::kHarmful : Label::kUnharmful;

    std::string response_trigger;
    if (rng.next_double() < spec.response_fraction) {
      bool response_harmful = rng.next_double() < spec.harmful_ratio;
      s.response = make_text(rng, spec.trigger_lexicon, response_harmful,
                             &response_trigger);
      s.response_label =
          response_harmful ? Label::kHarmful : Label::kUnharmful;
    }

    s.reasoning = make_reasoning(rng, s, text_trigger, plant_image,
                                 response_trigger);
    out.samples.push_back(std::move(s));
  }
  return out;
}

void AugmentationConfig::validate() const {
  if (target_fraction < 0.0 || target_fraction >= 1.0) {
    fail(ErrorKind::kConfigError, "augment.fraction must be in [0,1)");
  }
}

Sample concat_samples(const Sample& a, const Sample& b,
                      const AugmentationConfig& config) {
  config.validate();
  Sample child;
  child.id = a.id + "+" + b.id;
  child.source = "augment";
  child.parents = std::array<std::string, 2>{a.id, b.id};

  if (a.text.has_value() && b.text.has_value()) {
    child.text = *a.text + config.text_separator + *b.text;
  } else if (a.text.has_value()) {
    child.text = *a.text;
  } else if (b.text.has_value()) {
    child.text = *b.text;
  }

  if (a.image.has_value() && b.image.has_value()) {
    child.image = image_ref_from(
        merge_images(loaded_image(a), loaded_image(b), config.image_merge_mode));
  } else if (a.image.has_value()) {
    child.image = *a.image;
  } else if (b.image.has_value()) {
    child.image = *b.image;
  }

  if (child.text.has_value() && child.image.has_value()) {
    child.modality = Modality::kTextImage;
  } else if (child.image.has_value()) {
    child.modality = Modality::kImage;
  } else {
    child.modality = Modality::kText;
  }

  child.prompt_label = (a.prompt_label == Label::kHarmful ||
                        b.prompt_label == Label::kHarmful)
                           ? Label::kHarmful
                           : Label::kUnharmful;

  if (a.response.has_value() && b.response.has_value()) {
    child.response = *a.response + config.text_separator + *b.response;
    child.response_label = (*a.response_label == Label::kHarmful ||
                            *b.response_label == Label::kHarmful)
                               ? Label::kHarmful
                               : Label::kUnharmful;
  } else if (a.response.has_value()) {
    child.response = a.response;
    child.response_label = a.response_label;
  } else if (b.response.has_value()) {
    child.response = b.response;
    child.response_label = b.response_label;
  }
  return child;
}

Dataset augment(const Dataset& hard, const AugmentationConfig& config) {
  config.validate();
  Dataset out;
  out.name = hard.name;
  out.samples = hard.samples;
  if (config.target_fraction == 0.0) return out;
  std::size_t n = hard.samples.size();
  if (n < 2) {
    fail(ErrorKind::kInsufficientSamples,
         "augmentation needs at least 2 samples, got " + std::to_string(n));
  }
  std::size_t n_new = static_cast<std::size_t>(std::floor(
      config.target_fraction / (1.0 - config.target_fraction) *
      static_cast<double>(n)));

  std::unordered_set<std::string> ids;
  for (const Sample& s : hard.samples) ids.insert(s.id);

  Rng rng(config.seed);
  for (std::size_t k = 0; k < n_new; ++k) {
    std::size_t i = rng.next_index(n);
    std::size_t j = rng.next_index(n);
    while (j == i) j = rng.next_index(n);
    Sample child = concat_samples(hard.samples[i], hard.samples[j], config);
    std::string base = child.id;
    int suffix = 2;
    while (!ids.insert(child.id).second) {
      child.id = base + "#" + std::to_string(suffix++);
    }
    validate_sample(child);
    out.samples.push_back(std::move(child));
  }
  return out;
}

Dataset rejection_sample(const ToyPolicy& policy, const Dataset& dataset,
                         const RejectionConfig& config) {
  if (config.k < 1) fail(ErrorKind::kConfigError, "reject.k must be >= 1");
  std::vector<char> keep(dataset.samples.size(), 0);
  parallel_for(dataset.samples.size(), config.threads, [&](std::size_t idx) {
    const Sample& s = dataset.samples[idx];
    Rng rng(derive_seed(config.seed, "reject:" + s.id));
    std::vector<PolicyOutput> outputs = act_group(
        policy, s, config.k, config.temperature, rng, config.top_p);
    bool all_wrong = true;
    for (const PolicyOutput& out : outputs) {
      ReasoningOutput parsed =
          parse_output(render_output(out), s.has_response());
      SafetyScore score =
          safety_reward(parsed, s.prompt_label, s.response_label);
      if (score.r_safety >= 1.0) {
        all_wrong = false;
        break;
      }
    }
    keep[idx] = all_wrong ? 1 : 0;
  });

  Dataset out;
  out.name = dataset.name;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    if (keep[i]) out.samples.push_back(dataset.samples[i]);
  }
  return out;
}

}  // namespace guardlab
