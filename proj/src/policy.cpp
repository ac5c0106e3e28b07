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

#include "guardlab/policy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <numeric>

#include "guardlab/error.hpp"
#include "guardlab/fsutil.hpp"
#include "guardlab/tokenize.hpp"

namespace guardlab {

static_assert(std::endian::native == std::endian::little,
              "policy snapshots are little-endian");

namespace {

constexpr char kPolicyMagic[8] = {'G', 'R', 'D', 'P', 'O', 'L', 'C', 'Y'};
constexpr std::uint32_t kPolicyVersion = 1;

// Single-token pad words used to hit a bucket's token length exactly.
constexpr const char* kPadWords[] = {"review", "of",       "remaining",
                                     "content", "segments", "continues",
                                     "here"};

void add_hashed(FeatureVector& x, std::string_view prefix, std::string_view key,
                double value) {
  std::uint64_t h = fnv1a64(key, fnv1a64(prefix));
  std::size_t idx = static_cast<std::size_t>(h % x.size());
  double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
  x[idx] += sign * value;
}

std::vector<double> log_softmax(std::span<const double> logits) {
  double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - m);
  double lse = m + std::log(sum);
  std::vector<double> out(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
  return out;
}

std::vector<double> softmax_at_temperature(std::span<const double> logits,
                                           double temperature) {
  std::vector<double> scaled(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    scaled[i] = logits[i] / temperature;
  }
  std::vector<double> logp = log_softmax(scaled);
  for (double& v : logp) v = std::exp(v);
  return logp;
}

// Nucleus truncation: keeps the smallest prefix of classes (by descending
// probability, ties by index) whose mass reaches top_p, zeroing the rest.
std::vector<double> apply_top_p(std::vector<double> probs, double top_p) {
  if (top_p >= 1.0) return probs;
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });
  std::vector<double> kept(probs.size(), 0.0);
  double mass = 0.0;
  for (std::size_t idx : order) {
    kept[idx] = probs[idx];
    mass += probs[idx];
    if (mass >= top_p) break;
  }
  return kept;
}

int argmax_index(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

struct HeadDraws {
  std::vector<double> length_logits;
  std::vector<double> prompt_logits;
  std::vector<double> response_logits;
};

HeadDraws compute_logits(const ToyPolicy& policy, const Sample& sample) {
  FeatureVector x = featurize(sample, policy.config.feature_dim);
  HeadDraws draws;
  draws.length_logits = head_logits(policy.length_head, x);
  draws.prompt_logits = head_logits(policy.prompt_head, x);
  if (sample.has_response()) {
    draws.response_logits = head_logits(policy.response_head, x);
  }
  return draws;
}

PolicyOutput output_from_choices(const ToyPolicy& policy, const HeadDraws& draws,
                                 int bucket, int prompt_class,
                                 std::optional<int> response_class) {
  PolicyOutput out;
  out.length_bucket = bucket;
  out.prompt_label = prompt_class == 0 ? Label::kHarmful : Label::kUnharmful;
  out.reasoning_tokens =
      static_cast<std::size_t>(bucket_token_length(bucket, policy.config));
  double lp = log_softmax(draws.length_logits)[bucket] +
              log_softmax(draws.prompt_logits)[prompt_class];
  if (response_class.has_value()) {
    out.response_label = *response_class == 0 ? Label::kHarmful : Label::kUnharmful;
    lp += log_softmax(draws.response_logits)[*response_class];
  }
  out.log_prob = lp;
  return out;
}

int label_class(Label label) { return label == Label::kHarmful ? 0 : 1; }

void append_u32(std::string& buf, std::uint32_t v) {
  char bytes[4];
  std::memcpy(bytes, &v, 4);
  buf.append(bytes, 4);
}

std::uint32_t read_u32(std::string_view buf, std::size_t& pos) {
  if (pos + 4 > buf.size()) fail(ErrorKind::kParseError, "truncated policy file");
  std::uint32_t v;
  std::memcpy(&v, buf.data() + pos, 4);
  pos += 4;
  return v;
}

void append_head(std::string& buf, const LinearHead& head) {
  append_u32(buf, static_cast<std::uint32_t>(head.num_classes));
  append_u32(buf, static_cast<std::uint32_t>(head.input_dim));
  buf.append(reinterpret_cast<const char*>(head.weights.data()),
             head.weights.size() * sizeof(double));
}

void read_head(std::string_view buf, std::size_t& pos, LinearHead& head,
               int expect_classes, int expect_dim) {
  int classes = static_cast<int>(read_u32(buf, pos));
  int dim = static_cast<int>(read_u32(buf, pos));
  if (classes != expect_classes || dim != expect_dim) {
    fail(ErrorKind::kParseError, "policy head shape mismatch");
  }
  std::size_t bytes = static_cast<std::size_t>(classes) * (dim + 1) * sizeof(double);
  if (pos + bytes > buf.size()) fail(ErrorKind::kParseError, "truncated policy file");
  head.init(classes, dim);
  std::memcpy(head.weights.data(), buf.data() + pos, bytes);
  pos += bytes;
}

}  // namespace

void PolicyConfig::validate() const {
  if (feature_dim < 1) fail(ErrorKind::kConfigError, "policy.feature_dim must be >= 1");
  if (length_buckets < 1) fail(ErrorKind::kConfigError, "policy.length_buckets must be >= 1");
  if (max_reasoning_tokens < length_buckets) {
    fail(ErrorKind::kConfigError,
         "max_reasoning_tokens must be >= length_buckets");
  }
}

FeatureVector featurize(const Sample& sample, int feature_dim) {
  FeatureVector x(static_cast<std::size_t>(feature_dim), 0.0);
  if (sample.text.has_value()) {
    for (std::string_view tok : tokenize(*sample.text)) {
      add_hashed(x, "t:", tok, 1.0);
    }
  }
  if (sample.response.has_value()) {
    for (std::string_view tok : tokenize(*sample.response)) {
      add_hashed(x, "r:", tok, 1.0);
    }
  }
  if (sample.image.has_value()) {
    if (!sample.image->loaded()) {
      fail(ErrorKind::kStateError,
           "featurize needs a decoded image (id=" + sample.id + ")");
    }
    std::array<double, 64> hist = gray_histogram(sample.image->image);
    for (int b = 0; b < 64; ++b) {
      if (hist[b] != 0.0) {
        add_hashed(x, "i:", std::to_string(b), hist[b]);
      }
    }
  }
  return x;
}

std::vector<double> head_logits(const LinearHead& head, const FeatureVector& x) {
  if (static_cast<int>(x.size()) != head.input_dim) {
    fail(ErrorKind::kLengthMismatch, "feature dimension mismatch");
  }
  std::vector<double> logits(head.num_classes);
  for (int c = 0; c < head.num_classes; ++c) {
    std::span<const double> w = head.row(c);
    double acc = w[head.input_dim];  // bias
    for (int j = 0; j < head.input_dim; ++j) acc += w[j] * x[j];
    logits[c] = acc;
  }
  return logits;
}

ToyPolicy::ToyPolicy(const PolicyConfig& cfg) : config(cfg) {
  config.validate();
  length_head.init(config.length_buckets, config.feature_dim);
  prompt_head.init(2, config.feature_dim);
  response_head.init(2, config.feature_dim);
}

std::size_t ToyPolicy::param_count() const {
  return length_head.weights.size() + prompt_head.weights.size() +
         response_head.weights.size();
}

double* ToyPolicy::param_data(std::size_t index) {
  if (index < length_head.weights.size()) return &length_head.weights[index];
  index -= length_head.weights.size();
  if (index < prompt_head.weights.size()) return &prompt_head.weights[index];
  index -= prompt_head.weights.size();
  return &response_head.weights[index];
}

const double* ToyPolicy::param_data(std::size_t index) const {
  return const_cast<ToyPolicy*>(this)->param_data(index);
}

int bucket_token_length(int bucket, const PolicyConfig& config) {
  double nominal = (bucket + 0.5) * config.max_reasoning_tokens /
                   config.length_buckets;
  return std::max(1, static_cast<int>(std::llround(nominal)));
}

int bucket_of_token_count(std::size_t tokens, const PolicyConfig& config) {
  if (tokens >= static_cast<std::size_t>(config.max_reasoning_tokens)) {
    return config.length_buckets - 1;
  }
  std::size_t b = tokens * static_cast<std::size_t>(config.length_buckets) /
                  static_cast<std::size_t>(config.max_reasoning_tokens);
  return std::min<int>(static_cast<int>(b), config.length_buckets - 1);
}

std::string render_output(const PolicyOutput& output) {
  std::string think;
  std::size_t remaining = output.reasoning_tokens;
  int step = 1;
  while (remaining >= 8) {
    if (!think.empty()) think += '\n';
    think += "Step " + std::to_string(step) + ": examining content segment " +
             std::to_string(step) + ".";
    remaining -= 8;
    ++step;
  }
  if (remaining > 0) {
    if (!think.empty()) think += '\n';
    for (std::size_t i = 0; i < remaining; ++i) {
      if (i > 0) think += ' ';
      think += kPadWords[i];
    }
  }
  std::string out = "<think>" + think + "</think>\n<result>Request: ";
  out += to_string(output.prompt_label);
  if (output.response_label.has_value()) {
    out += "\nResponse: ";
    out += to_string(*output.response_label);
  }
  out += "</result>";
  return out;
}

std::vector<PolicyOutput> act_group(const ToyPolicy& policy, const Sample& sample,
                                    int group_size, double temperature, Rng& rng,
                                    double top_p) {
  if (temperature <= 0.0) {
    fail(ErrorKind::kConfigError, "sampling temperature must be > 0");
  }
  if (!(top_p > 0.0) || top_p > 1.0) {
    fail(ErrorKind::kConfigError, "top_p must be in (0,1]");
  }
  HeadDraws draws = compute_logits(policy, sample);
  std::vector<double> length_probs =
      apply_top_p(softmax_at_temperature(draws.length_logits, temperature), top_p);
  std::vector<double> prompt_probs =
      apply_top_p(softmax_at_temperature(draws.prompt_logits, temperature), top_p);
  std::vector<double> response_probs;
  if (sample.has_response()) {
    response_probs = apply_top_p(
        softmax_at_temperature(draws.response_logits, temperature), top_p);
  }

  std::vector<PolicyOutput> outputs;
  outputs.reserve(static_cast<std::size_t>(group_size));
  for (int g = 0; g < group_size; ++g) {
    int bucket = static_cast<int>(rng.sample_categorical(length_probs));
    int prompt_class = static_cast<int>(rng.sample_categorical(prompt_probs));
    std::optional<int> response_class;
    if (sample.has_response()) {
      response_class = static_cast<int>(rng.sample_categorical(response_probs));
    }
    outputs.push_back(
        output_from_choices(policy, draws, bucket, prompt_class, response_class));
  }
  return outputs;
}

PolicyOutput act(const ToyPolicy& policy, const Sample& sample, double temperature,
                 std::uint64_t seed, double top_p) {
  Rng rng(seed);
  return act_group(policy, sample, 1, temperature, rng, top_p)[0];
}

PolicyOutput greedy_output(const ToyPolicy& policy, const Sample& sample) {
  HeadDraws draws = compute_logits(policy, sample);
  int bucket = argmax_index(draws.length_logits);
  int prompt_class = argmax_index(draws.prompt_logits);
  std::optional<int> response_class;
  if (sample.has_response()) {
    response_class = argmax_index(draws.response_logits);
  }
  return output_from_choices(policy, draws, bucket, prompt_class, response_class);
}

double log_prob(const ToyPolicy& policy, const Sample& sample,
                const PolicyOutput& output) {
  if (output.response_label.has_value() != sample.has_response()) {
    fail(ErrorKind::kTaskMismatch,
         output.response_label.has_value()
             ? "output carries a response label but the sample has no response"
             : "sample has a response but the output lacks a response label");
  }
  if (output.length_bucket < 0 ||
      output.length_bucket >= policy.config.length_buckets) {
    fail(ErrorKind::kTaskMismatch, "length bucket out of range");
  }
  HeadDraws draws = compute_logits(policy, sample);
  std::optional<int> response_class;
  if (output.response_label.has_value()) {
    response_class = label_class(*output.response_label);
  }
  return output_from_choices(policy, draws, output.length_bucket,
                             label_class(output.prompt_label), response_class)
      .log_prob;
}

PolicyGrad grad_log_prob(const ToyPolicy& policy, const Sample& sample,
                         const PolicyOutput& output) {
  if (output.response_label.has_value() != sample.has_response()) {
    fail(ErrorKind::kTaskMismatch,
         output.response_label.has_value()
             ? "output carries a response label but the sample has no response"
             : "sample has a response but the output lacks a response label");
  }
  if (output.length_bucket < 0 ||
      output.length_bucket >= policy.config.length_buckets) {
    fail(ErrorKind::kTaskMismatch, "length bucket out of range");
  }
  FeatureVector x = featurize(sample, policy.config.feature_dim);
  PolicyGrad grad(policy);

  std::size_t offset = 0;
  auto accumulate = [&](const LinearHead& head, int chosen) {
    std::vector<double> p = softmax_at_temperature(head_logits(head, x), 1.0);
    for (int c = 0; c < head.num_classes; ++c) {
      double coef = (c == chosen ? 1.0 : 0.0) - p[c];
      double* row = grad.values.data() + offset +
                    static_cast<std::size_t>(c) * (head.input_dim + 1);
      for (int j = 0; j < head.input_dim; ++j) row[j] += coef * x[j];
      row[head.input_dim] += coef;
    }
    offset += head.weights.size();
  };

  accumulate(policy.length_head, output.length_bucket);
  accumulate(policy.prompt_head, label_class(output.prompt_label));
  if (output.response_label.has_value()) {
    accumulate(policy.response_head, label_class(*output.response_label));
  }
  return grad;
}

void save_policy(const ToyPolicy& policy, const std::string& path) {
  std::string buf;
  buf.append(kPolicyMagic, sizeof(kPolicyMagic));
  append_u32(buf, kPolicyVersion);
  append_u32(buf, static_cast<std::uint32_t>(policy.config.feature_dim));
  append_u32(buf, static_cast<std::uint32_t>(policy.config.length_buckets));
  append_u32(buf, static_cast<std::uint32_t>(policy.config.max_reasoning_tokens));
  append_head(buf, policy.length_head);
  append_head(buf, policy.prompt_head);
  append_head(buf, policy.response_head);
  atomic_write_file(path, buf);
}

ToyPolicy load_policy(const std::string& path) {
  std::string buf = read_file(path);
  if (buf.size() < sizeof(kPolicyMagic) ||
      std::memcmp(buf.data(), kPolicyMagic, sizeof(kPolicyMagic)) != 0) {
    fail(ErrorKind::kParseError, "not a policy file: " + path);
  }
  std::size_t pos = sizeof(kPolicyMagic);
  std::uint32_t version = read_u32(buf, pos);
  if (version != kPolicyVersion) {
    fail(ErrorKind::kParseError,
         "unsupported policy version " + std::to_string(version));
  }
  PolicyConfig cfg;
  cfg.feature_dim = static_cast<int>(read_u32(buf, pos));
  cfg.length_buckets = static_cast<int>(read_u32(buf, pos));
  cfg.max_reasoning_tokens = static_cast<int>(read_u32(buf, pos));
  ToyPolicy policy(cfg);
  read_head(buf, pos, policy.length_head, cfg.length_buckets, cfg.feature_dim);
  read_head(buf, pos, policy.prompt_head, 2, cfg.feature_dim);
  read_head(buf, pos, policy.response_head, 2, cfg.feature_dim);
  if (pos != buf.size()) {
    fail(ErrorKind::kParseError, "trailing bytes in policy file");
  }
  return policy;
}

}  // namespace guardlab
