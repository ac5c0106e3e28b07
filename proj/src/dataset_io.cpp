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

#include "guardlab/dataset_io.hpp"

#include <filesystem>

#include <json.hpp>

#include "guardlab/error.hpp"
#include "guardlab/fsutil.hpp"

namespace guardlab {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kKnownKeys[] = {
    "id",           "modality",  "text",      "image_path",
    "image_b64",    "response",  "prompt_label", "response_label",
    "reasoning",    "source",    "parents"};

[[noreturn]] void line_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::kParseError, "line " + std::to_string(line) + ": " + what);
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) line_error(line, std::string("missing field '") + key + "'");
  if (!it->is_string()) line_error(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (!it->is_string()) line_error(line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

Sample sample_from_json(const json& obj, std::size_t line) {
  if (!obj.is_object()) line_error(line, "expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : kKnownKeys) {
      if (it.key() == key) { known = true; break; }
    }
    if (!known) line_error(line, "unknown field '" + it.key() + "'");
  }

  Sample s;
  s.id = require_string(obj, "id", line);
  std::string modality = require_string(obj, "modality", line);
  auto parsed_modality = parse_modality(modality);
  if (!parsed_modality) line_error(line, "unknown modality '" + modality + "'");
  s.modality = *parsed_modality;

  s.text = optional_string(obj, "text", line);
  std::optional<std::string> image_path = optional_string(obj, "image_path", line);
  std::optional<std::string> image_b64 = optional_string(obj, "image_b64", line);
  if (image_path && image_b64) {
    line_error(line, "both image_path and image_b64 present");
  }
  if (image_path || image_b64) {
    ImageRef ref;
    ref.path = image_path;
    ref.b64 = image_b64;
    s.image = std::move(ref);
  }
  s.response = optional_string(obj, "response", line);

  std::string prompt_label = require_string(obj, "prompt_label", line);
  auto parsed_prompt = parse_label(prompt_label);
  if (!parsed_prompt) line_error(line, "unknown prompt_label '" + prompt_label + "'");
  s.prompt_label = *parsed_prompt;

  if (auto text = optional_string(obj, "response_label", line)) {
    auto parsed = parse_label(*text);
    if (!parsed) line_error(line, "unknown response_label '" + *text + "'");
    s.response_label = *parsed;
  }

  if (auto it = obj.find("reasoning"); it != obj.end()) {
    if (!it->is_array()) line_error(line, "field 'reasoning' must be an array of strings");
    std::vector<std::string> steps;
    for (const auto& step : *it) {
      if (!step.is_string()) line_error(line, "reasoning steps must be strings");
      steps.push_back(step.get<std::string>());
    }
    s.reasoning = std::move(steps);
  }

  s.source = require_string(obj, "source", line);

  if (auto it = obj.find("parents"); it != obj.end()) {
    if (!it->is_array() || it->size() != 2) {
      line_error(line, "field 'parents' must be an array of 2 ids");
    }
    std::array<std::string, 2> parents;
    for (std::size_t i = 0; i < 2; ++i) {
      if (!(*it)[i].is_string()) line_error(line, "parent ids must be strings");
      parents[i] = (*it)[i].get<std::string>();
    }
    s.parents = parents;
  }
  return s;
}

json sample_to_json(const Sample& s) {
  json obj = json::object();
  obj["id"] = s.id;
  obj["modality"] = std::string(to_string(s.modality));
  if (s.text) obj["text"] = *s.text;
  if (s.image) {
    if (s.image->path) obj["image_path"] = *s.image->path;
    if (s.image->b64) obj["image_b64"] = *s.image->b64;
  }
  if (s.response) obj["response"] = *s.response;
  obj["prompt_label"] = std::string(to_string(s.prompt_label));
  if (s.response_label) {
    obj["response_label"] = std::string(to_string(*s.response_label));
  }
  if (s.reasoning) obj["reasoning"] = *s.reasoning;
  obj["source"] = s.source;
  if (s.parents) obj["parents"] = {(*s.parents)[0], (*s.parents)[1]};
  return obj;
}

}  // namespace

Dataset parse_jsonl(std::string_view content, const std::string& name) {
  Dataset dataset;
  dataset.name = name;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    std::string_view line = content.substr(
        pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? content.size() : end + 1;
    ++line_no;
    if (line.empty()) {
      if (pos >= content.size()) break;  // single trailing newline
      line_error(line_no, "blank line in dataset file");
    }
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      line_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    dataset.samples.push_back(sample_from_json(obj, line_no));
  }
  return dataset;
}

std::string to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const Sample& s : dataset.samples) {
    out += sample_to_json(s).dump();
    out += '\n';
  }
  return out;
}

Dataset read_jsonl_file(const std::string& path) {
  Dataset dataset = parse_jsonl(read_file(path), std::filesystem::path(path).stem().string());
  return dataset;
}

void write_jsonl_file(const Dataset& dataset, const std::string& path) {
  atomic_write_file(path, to_jsonl(dataset));
}

}  // namespace guardlab
