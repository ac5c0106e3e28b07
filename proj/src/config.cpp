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

#include "guardlab/config.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "guardlab/error.hpp"
#include "guardlab/fsutil.hpp"
#include "guardlab/rng.hpp"

namespace guardlab {
namespace {

enum class ValueType { kBool, kInt, kDouble, kString };

struct RegistryEntry {
  const char* key;
  ValueType type;
  RunConfig::Value default_value;
};

// Single source of truth for every configuration key. Dump order follows
// this table.
const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = {
      {"run.seed", ValueType::kInt, std::int64_t{1}},
      {"run.threads", ValueType::kInt, std::int64_t{0}},
      {"reward.beta", ValueType::kDouble, 1.0},
      {"reward.max_reasoning_tokens", ValueType::kInt, std::int64_t{1024}},
      {"policy.feature_dim", ValueType::kInt, std::int64_t{1024}},
      {"policy.length_buckets", ValueType::kInt, std::int64_t{8}},
      {"template.instruction", ValueType::kString, std::string()},
      {"synth.n_samples", ValueType::kInt, std::int64_t{1000}},
      {"synth.mix_text", ValueType::kDouble, 0.5},
      {"synth.mix_image", ValueType::kDouble, 0.25},
      {"synth.mix_text_image", ValueType::kDouble, 0.25},
      {"synth.harmful_ratio", ValueType::kDouble, 0.5},
      {"synth.response_fraction", ValueType::kDouble, 0.5},
      {"synth.lexicon", ValueType::kString,
       std::string("redmercury,blackice,hexfume,novacell,pyrolith")},
      {"synth.image_size", ValueType::kInt, std::int64_t{32}},
      {"synth.trigger_block_size", ValueType::kInt, std::int64_t{8}},
      {"synth.trigger_block_value", ValueType::kInt, std::int64_t{255}},
      {"synth.seed", ValueType::kInt, std::int64_t{-1}},
      {"sft.epochs", ValueType::kInt, std::int64_t{1}},
      {"sft.batch_size", ValueType::kInt, std::int64_t{32}},
      {"sft.lr", ValueType::kDouble, 0.05},
      {"reject.k", ValueType::kInt, std::int64_t{4}},
      {"reject.temperature", ValueType::kDouble, 1.0},
      {"reject.top_p", ValueType::kDouble, 0.95},
      {"reject.seed", ValueType::kInt, std::int64_t{-1}},
      {"augment.fraction", ValueType::kDouble, 0.20},
      {"augment.text_separator", ValueType::kString, std::string("\n")},
      {"augment.image_merge_mode", ValueType::kString, std::string("horizontal")},
      {"augment.seed", ValueType::kInt, std::int64_t{-1}},
      {"trainer.group_size", ValueType::kInt, std::int64_t{16}},
      {"trainer.epsilon", ValueType::kDouble, 0.2},
      {"trainer.s_total", ValueType::kInt, std::int64_t{500}},
      {"trainer.steps", ValueType::kInt, std::int64_t{-1}},
      {"trainer.temperature", ValueType::kDouble, 1.2},
      {"trainer.lr", ValueType::kDouble, 0.05},
      {"trainer.weight_decay", ValueType::kDouble, 0.01},
      {"trainer.momentum", ValueType::kDouble, 0.0},
      {"trainer.rollout_batch", ValueType::kInt, std::int64_t{64}},
      {"trainer.actor_batch", ValueType::kInt, std::int64_t{32}},
      {"trainer.require_cold_start", ValueType::kBool, true},
      {"trainer.seed", ValueType::kInt, std::int64_t{-1}},
      {"remote.base_url", ValueType::kString, std::string()},
      {"remote.path", ValueType::kString, std::string("/v1/chat/completions")},
      {"remote.model", ValueType::kString, std::string("guard-remote")},
      {"remote.timeout_seconds", ValueType::kDouble, 60.0},
      {"remote.concurrency", ValueType::kInt, std::int64_t{8}},
      {"eval.concurrency", ValueType::kInt, std::int64_t{8}},
  };
  return entries;
}

const RegistryEntry* find_entry(const std::string& key) {
  for (const RegistryEntry& e : registry()) {
    if (key == e.key) return &e;
  }
  return nullptr;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

[[noreturn]] void config_error(const std::string& origin, std::size_t line,
                               const std::string& what) {
  fail(ErrorKind::kConfigError,
       origin + ":" + std::to_string(line) + ": " + what);
}

std::string unescape_string(std::string_view body, const std::string& origin,
                            std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= body.size()) config_error(origin, line, "dangling escape");
    switch (body[i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      default: config_error(origin, line, "unsupported escape sequence");
    }
  }
  return out;
}

std::string escape_string(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

bool parse_int_token(std::string_view text, std::int64_t& out) {
  if (text.empty()) return false;
  std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (i == text.size()) return false;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') return false;
  }
  out = std::strtoll(std::string(text).c_str(), nullptr, 10);
  return true;
}

bool parse_double_token(std::string_view text, double& out) {
  if (text.empty()) return false;
  std::string buf(text);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size();
}

}  // namespace

RunConfig::RunConfig() {
  for (const RegistryEntry& e : registry()) {
    values_.emplace(e.key, e.default_value);
  }
}

RunConfig RunConfig::load(const std::string& toml_path) {
  RunConfig config;
  config.apply_toml(read_file(toml_path), toml_path);
  return config;
}

void RunConfig::apply_toml(const std::string& content, const std::string& origin) {
  std::string section;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= content.size()) {
    if (pos == content.size()) break;
    std::size_t end = content.find('\n', pos);
    std::string_view line(content.data() + pos,
                          (end == std::string::npos ? content.size() : end) - pos);
    pos = end == std::string::npos ? content.size() : end + 1;
    ++line_no;

    std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') config_error(origin, line_no, "unterminated section header");
      std::string_view name = trim(stripped.substr(1, stripped.size() - 2));
      if (name.empty()) config_error(origin, line_no, "empty section name");
      section = std::string(name);
      continue;
    }
    std::size_t eq = std::string_view::npos;
    bool in_string = false;
    for (std::size_t i = 0; i < stripped.size(); ++i) {
      char c = stripped[i];
      if (c == '"' && (i == 0 || stripped[i - 1] != '\\')) in_string = !in_string;
      if (c == '=' && !in_string) { eq = i; break; }
    }
    if (eq == std::string_view::npos) {
      config_error(origin, line_no, "expected key = value");
    }
    std::string key(trim(stripped.substr(0, eq)));
    std::string_view value = trim(stripped.substr(eq + 1));
    if (key.empty()) config_error(origin, line_no, "empty key");
    if (!section.empty()) key = section + "." + key;

    // Strip a trailing comment from non-string values.
    if (value.empty()) config_error(origin, line_no, "empty value");
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        config_error(origin, line_no, "unterminated string value");
      }
      const RegistryEntry* entry = find_entry(key);
      if (entry == nullptr) config_error(origin, line_no, "unknown key '" + key + "'");
      if (entry->type != ValueType::kString) {
        config_error(origin, line_no, "key '" + key + "' is not a string");
      }
      values_[key] = unescape_string(value.substr(1, value.size() - 2), origin, line_no);
      continue;
    }
    if (std::size_t hash = value.find('#'); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
      if (value.empty()) config_error(origin, line_no, "empty value");
    }
    try {
      set(key, std::string(value));
    } catch (const Error& e) {
      config_error(origin, line_no, e.what());
    }
  }
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const RegistryEntry* entry = find_entry(key);
  if (entry == nullptr) {
    fail(ErrorKind::kConfigError, "unknown config key '" + key + "'");
  }
  switch (entry->type) {
    case ValueType::kBool: {
      if (value == "true") { values_[key] = true; return; }
      if (value == "false") { values_[key] = false; return; }
      fail(ErrorKind::kConfigError, "key '" + key + "' expects true/false");
    }
    case ValueType::kInt: {
      std::int64_t parsed = 0;
      if (!parse_int_token(value, parsed)) {
        fail(ErrorKind::kConfigError, "key '" + key + "' expects an integer");
      }
      values_[key] = parsed;
      return;
    }
    case ValueType::kDouble: {
      double parsed = 0.0;
      if (!parse_double_token(value, parsed)) {
        fail(ErrorKind::kConfigError, "key '" + key + "' expects a number");
      }
      values_[key] = parsed;
      return;
    }
    case ValueType::kString: {
      values_[key] = value;
      return;
    }
  }
}

const RunConfig::Value& RunConfig::lookup(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    fail(ErrorKind::kConfigError, "unknown config key '" + key + "'");
  }
  return it->second;
}

bool RunConfig::get_bool(const std::string& key) const {
  const Value& v = lookup(key);
  if (const bool* b = std::get_if<bool>(&v)) return *b;
  fail(ErrorKind::kConfigError, "key '" + key + "' is not a bool");
}

std::int64_t RunConfig::get_int(const std::string& key) const {
  const Value& v = lookup(key);
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) return *i;
  fail(ErrorKind::kConfigError, "key '" + key + "' is not an integer");
}

double RunConfig::get_double(const std::string& key) const {
  const Value& v = lookup(key);
  if (const double* d = std::get_if<double>(&v)) return *d;
  if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) {
    return static_cast<double>(*i);
  }
  fail(ErrorKind::kConfigError, "key '" + key + "' is not a number");
}

const std::string& RunConfig::get_string(const std::string& key) const {
  const Value& v = lookup(key);
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  fail(ErrorKind::kConfigError, "key '" + key + "' is not a string");
}

std::string RunConfig::dump_toml() const {
  std::string out;
  std::string section;
  char buf[64];
  for (const RegistryEntry& e : registry()) {
    std::string key(e.key);
    std::size_t dot = key.find('.');
    std::string this_section = key.substr(0, dot);
    std::string short_key = key.substr(dot + 1);
    if (this_section != section) {
      if (!out.empty()) out += '\n';
      out += "[" + this_section + "]\n";
      section = this_section;
    }
    const Value& v = values_.at(key);
    out += short_key + " = ";
    if (const bool* b = std::get_if<bool>(&v)) {
      out += *b ? "true" : "false";
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&v)) {
      out += std::to_string(*i);
    } else if (const double* d = std::get_if<double>(&v)) {
      std::snprintf(buf, sizeof(buf), "%.17g", *d);
      out += buf;
    } else {
      out += escape_string(std::get<std::string>(v));
    }
    out += '\n';
  }
  return out;
}

std::uint64_t RunConfig::stage_seed(const std::string& stage) const {
  std::int64_t own = get_int(stage + ".seed");
  if (own >= 0) return static_cast<std::uint64_t>(own);
  return derive_seed(static_cast<std::uint64_t>(get_int("run.seed")), stage);
}

int RunConfig::threads() const {
  return static_cast<int>(get_int("run.threads"));
}

RewardConfig RunConfig::reward() const {
  RewardConfig cfg;
  cfg.beta = get_double("reward.beta");
  cfg.max_reasoning_tokens = static_cast<int>(get_int("reward.max_reasoning_tokens"));
  cfg.validate();
  return cfg;
}

PolicyConfig RunConfig::policy() const {
  PolicyConfig cfg;
  cfg.feature_dim = static_cast<int>(get_int("policy.feature_dim"));
  cfg.length_buckets = static_cast<int>(get_int("policy.length_buckets"));
  cfg.max_reasoning_tokens = static_cast<int>(get_int("reward.max_reasoning_tokens"));
  cfg.validate();
  return cfg;
}

SyntheticSpec RunConfig::synth() const {
  SyntheticSpec spec;
  spec.n_samples = static_cast<int>(get_int("synth.n_samples"));
  spec.mix_text = get_double("synth.mix_text");
  spec.mix_image = get_double("synth.mix_image");
  spec.mix_text_image = get_double("synth.mix_text_image");
  spec.harmful_ratio = get_double("synth.harmful_ratio");
  spec.response_fraction = get_double("synth.response_fraction");
  spec.trigger_lexicon.clear();
  const std::string& lexicon = get_string("synth.lexicon");
  std::size_t pos = 0;
  while (pos <= lexicon.size() && !lexicon.empty()) {
    std::size_t comma = lexicon.find(',', pos);
    std::string token(trim(lexicon.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos)));
    if (!token.empty()) spec.trigger_lexicon.push_back(token);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  spec.image_size = static_cast<int>(get_int("synth.image_size"));
  spec.trigger_block_size = static_cast<int>(get_int("synth.trigger_block_size"));
  std::int64_t value = get_int("synth.trigger_block_value");
  if (value < 0 || value > 255) {
    fail(ErrorKind::kConfigError, "synth.trigger_block_value must be in [0,255]");
  }
  spec.trigger_block_value = static_cast<std::uint8_t>(value);
  spec.seed = stage_seed("synth");
  spec.validate();
  return spec;
}

AugmentationConfig RunConfig::augmentation() const {
  AugmentationConfig cfg;
  cfg.target_fraction = get_double("augment.fraction");
  cfg.text_separator = get_string("augment.text_separator");
  const std::string& mode = get_string("augment.image_merge_mode");
  if (mode == "horizontal") {
    cfg.image_merge_mode = MergeMode::kHorizontal;
  } else if (mode == "vertical") {
    cfg.image_merge_mode = MergeMode::kVertical;
  } else {
    fail(ErrorKind::kConfigError,
         "augment.image_merge_mode must be horizontal or vertical");
  }
  cfg.seed = stage_seed("augment");
  cfg.validate();
  return cfg;
}

RejectionConfig RunConfig::rejection() const {
  RejectionConfig cfg;
  cfg.k = static_cast<int>(get_int("reject.k"));
  cfg.temperature = get_double("reject.temperature");
  cfg.top_p = get_double("reject.top_p");
  cfg.seed = stage_seed("reject");
  cfg.threads = threads();
  return cfg;
}

TrainerConfig RunConfig::trainer() const {
  TrainerConfig cfg;
  cfg.group_size = static_cast<int>(get_int("trainer.group_size"));
  cfg.epsilon = get_double("trainer.epsilon");
  cfg.s_total = static_cast<int>(get_int("trainer.s_total"));
  cfg.temperature = get_double("trainer.temperature");
  cfg.lr = get_double("trainer.lr");
  cfg.weight_decay = get_double("trainer.weight_decay");
  cfg.momentum = get_double("trainer.momentum");
  cfg.rollout_batch = static_cast<int>(get_int("trainer.rollout_batch"));
  cfg.actor_batch = static_cast<int>(get_int("trainer.actor_batch"));
  cfg.seed = stage_seed("trainer");
  cfg.threads = threads();
  cfg.validate();
  return cfg;
}

RemoteEndpoint RunConfig::remote() const {
  RemoteEndpoint endpoint;
  endpoint.base_url = get_string("remote.base_url");
  endpoint.path = get_string("remote.path");
  endpoint.model = get_string("remote.model");
  endpoint.timeout_seconds = get_double("remote.timeout_seconds");
  endpoint.api_key = api_key_from_env();
  return endpoint;
}

PromptTemplate RunConfig::prompt_template() const {
  PromptTemplate tmpl = default_template();
  const std::string& instruction = get_string("template.instruction");
  if (!instruction.empty()) tmpl.instruction = instruction;
  return tmpl;
}

}  // namespace guardlab
