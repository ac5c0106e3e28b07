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

#include "guardlab/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "guardlab/error.hpp"
#include "guardlab/format.hpp"
#include "guardlab/parallel.hpp"
#include "guardlab/rng.hpp"
#include "guardlab/tokenize.hpp"

namespace guardlab {
namespace {

constexpr double kDegenerateStd = 1e-6;

double clip(double v, double lo, double hi) {
  return std::min(std::max(v, lo), hi);
}

// log softmax(Wx)[c] and the probability vector, shared by SFT and the
// surrogate gradient.
struct HeadEval {
  std::vector<double> probs;
  std::vector<double> logp;
};

HeadEval eval_head(const LinearHead& head, const FeatureVector& x) {
  std::vector<double> logits = head_logits(head, x);
  double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double l : logits) sum += std::exp(l - m);
  double lse = m + std::log(sum);
  HeadEval eval;
  eval.logp.resize(logits.size());
  eval.probs.resize(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    eval.logp[i] = logits[i] - lse;
    eval.probs[i] = std::exp(eval.logp[i]);
  }
  return eval;
}

// grad.values layout mirrors the policy's flat parameter order.
void add_outer(PolicyGrad& grad, std::size_t offset, const LinearHead& head,
               std::span<const double> class_coefs, const FeatureVector& x) {
  for (int c = 0; c < head.num_classes; ++c) {
    double coef = class_coefs[c];
    if (coef == 0.0) continue;
    double* row = grad.values.data() + offset +
                  static_cast<std::size_t>(c) * (head.input_dim + 1);
    for (int j = 0; j < head.input_dim; ++j) row[j] += coef * x[j];
    row[head.input_dim] += coef;
  }
}

int label_class(Label label) { return label == Label::kHarmful ? 0 : 1; }

}  // namespace

double clip_bound(int s, const ClipSchedule& schedule) {
  if (schedule.s_total < 1) {
    fail(ErrorKind::kConfigError, "s_total must be >= 1");
  }
  if (s < 0 || s > schedule.s_total) {
    fail(ErrorKind::kStepOutOfRange,
         "step " + std::to_string(s) + " outside [0, " +
             std::to_string(schedule.s_total) + "]");
  }
  double bound = schedule.epsilon;
  for (int i = 1; i <= s; ++i) {
    bound *= static_cast<double>(schedule.s_total - i) /
             static_cast<double>(schedule.s_total);
  }
  return bound;
}

std::vector<double> group_advantages(std::span<const double> rewards) {
  if (rewards.size() < 2) {
    fail(ErrorKind::kGroupTooSmall,
         "advantage standardization needs a group of >= 2 rewards");
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  double std_dev = std::sqrt(var);
  std::vector<double> advantages(rewards.size(), 0.0);
  if (std_dev < kDegenerateStd) return advantages;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    advantages[i] = (rewards[i] - mean) / std_dev;
  }
  return advantages;
}

double surrogate_loss(std::span<const double> ratios,
                      std::span<const double> advantages, double bound) {
  if (ratios.size() != advantages.size()) {
    fail(ErrorKind::kLengthMismatch, "ratios and advantages differ in length");
  }
  if (ratios.empty()) fail(ErrorKind::kEmptyInput, "empty rollout group");
  if (bound < 0.0) fail(ErrorKind::kConfigError, "clip bound must be >= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    double unclipped = ratios[i] * advantages[i];
    double clipped = clip(ratios[i], 1.0 - bound, 1.0 + bound) * advantages[i];
    acc += std::min(unclipped, clipped);
  }
  return -acc / static_cast<double>(ratios.size());
}

double surrogate_loss_and_grad(const ToyPolicy& policy, const RolloutGroup& group,
                               double bound, PolicyGrad* grad) {
  const Sample& sample = *group.sample;
  std::size_t g = group.outputs.size();
  if (g == 0) fail(ErrorKind::kEmptyInput, "empty rollout group");
  if (group.old_log_probs.size() != g || group.advantages.size() != g) {
    fail(ErrorKind::kLengthMismatch, "rollout group fields differ in length");
  }

  FeatureVector x = featurize(sample, policy.config.feature_dim);
  HeadEval length_eval = eval_head(policy.length_head, x);
  HeadEval prompt_eval = eval_head(policy.prompt_head, x);
  HeadEval response_eval;
  if (sample.has_response()) {
    response_eval = eval_head(policy.response_head, x);
  }

  std::vector<double> length_coefs(length_eval.probs.size(), 0.0);
  std::vector<double> prompt_coefs(prompt_eval.probs.size(), 0.0);
  std::vector<double> response_coefs(response_eval.probs.size(), 0.0);

  double inv_g = 1.0 / static_cast<double>(g);
  double loss = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const PolicyOutput& out = group.outputs[i];
    if (out.response_label.has_value() != sample.has_response()) {
      fail(ErrorKind::kTaskMismatch, "rollout task set mismatch");
    }
    double lp = length_eval.logp[out.length_bucket] +
                prompt_eval.logp[label_class(out.prompt_label)];
    if (out.response_label.has_value()) {
      lp += response_eval.logp[label_class(*out.response_label)];
    }
    double ratio = std::exp(lp - group.old_log_probs[i]);
    double advantage = group.advantages[i];
    double unclipped = ratio * advantage;
    double clipped = clip(ratio, 1.0 - bound, 1.0 + bound) * advantage;
    loss -= inv_g * std::min(unclipped, clipped);
    if (grad == nullptr) continue;
    // min picks the unclipped branch (ties included, where clip is the
    // identity); the clipped branch is constant in theta.
    if (unclipped <= clipped) {
      double w = -inv_g * advantage * ratio;
      for (std::size_t c = 0; c < length_coefs.size(); ++c) {
        double onehot = static_cast<int>(c) == out.length_bucket ? 1.0 : 0.0;
        length_coefs[c] += w * (onehot - length_eval.probs[c]);
      }
      for (std::size_t c = 0; c < prompt_coefs.size(); ++c) {
        double onehot =
            static_cast<int>(c) == label_class(out.prompt_label) ? 1.0 : 0.0;
        prompt_coefs[c] += w * (onehot - prompt_eval.probs[c]);
      }
      if (out.response_label.has_value()) {
        for (std::size_t c = 0; c < response_coefs.size(); ++c) {
          double onehot =
              static_cast<int>(c) == label_class(*out.response_label) ? 1.0 : 0.0;
          response_coefs[c] += w * (onehot - response_eval.probs[c]);
        }
      }
    }
  }

  if (grad != nullptr) {
    std::size_t offset = 0;
    add_outer(*grad, offset, policy.length_head, length_coefs, x);
    offset += policy.length_head.weights.size();
    add_outer(*grad, offset, policy.prompt_head, prompt_coefs, x);
    offset += policy.prompt_head.weights.size();
    if (sample.has_response()) {
      add_outer(*grad, offset, policy.response_head, response_coefs, x);
    }
  }
  return loss;
}

void TrainerConfig::validate() const {
  if (group_size < 2) {
    fail(ErrorKind::kGroupTooSmall, "trainer.group_size must be >= 2");
  }
  if (epsilon <  0.0) fail(ErrorKind::kConfigError, "trainer.epsilon must be >= 0");
  if (s_total < 1) fail(ErrorKind::kConfigError, "trainer.s_total must be >= 1");
  if (temperature <= 0.0) {
    fail(ErrorKind::kConfigError, "trainer.temperature must be > 0");
  }
  if (lr <= 0.0) fail(ErrorKind::kConfigError, "trainer.lr must be > 0");
  if (weight_decay < 0.0) {
    fail(ErrorKind::kConfigError, "trainer.weight_decay must be >= 0");
  }
  if (momentum < 0.0 || momentum >= 1.0) {
    fail(ErrorKind::kConfigError, "trainer.momentum must be in [0,1)");
  }
  if (rollout_batch < 1 || actor_batch < 1) {
    fail(ErrorKind::kConfigError, "trainer batch sizes must be >= 1");
  }
}

Trainer::Trainer(ToyPolicy& policy, const TrainerConfig& config,
                 const RewardConfig& reward)
    : policy_(policy), old_policy_(policy), config_(config), reward_(reward) {
  config_.validate();
  reward_.validate();
  if (policy_.config.max_reasoning_tokens != reward_.max_reasoning_tokens) {
    fail(ErrorKind::kConfigError,
         "policy bucket span and reward.max_reasoning_tokens disagree");
  }
  velocity_.assign(policy_.param_count(), 0.0);
}

void Trainer::apply_update(const PolicyGrad& grad, double learning_rate) {
  // Plain gradient descent with optional momentum and decoupled weight decay.
  std::size_t n = policy_.param_count();
  for (std::size_t i = 0; i < n; ++i) {
    double* theta = policy_.param_data(i);
    double v = config_.momentum * velocity_[i] + grad.values[i];
    velocity_[i] = v;
    *theta -= learning_rate * v + learning_rate * config_.weight_decay * *theta;
  }
}

double Trainer::sft_step(std::span<const Sample* const> batch,
                         double learning_rate) {
  if (batch.empty()) fail(ErrorKind::kEmptyInput, "empty SFT batch");
  PolicyGrad grad(policy_);
  double loss = 0.0;
  double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const Sample* sample : batch) {
    if (!sample->reasoning.has_value()) {
      fail(ErrorKind::kValidationFailed,
           "SFT sample lacks gold reasoning (id=" + sample->id + ")");
    }
    std::string think;
    for (std::size_t i = 0; i < sample->reasoning->size(); ++i) {
      if (i > 0) think += '\n';
      think += (*sample->reasoning)[i];
    }
    int bucket = bucket_of_token_count(count_tokens(think), policy_.config);

    FeatureVector x = featurize(*sample, policy_.config.feature_dim);
    std::size_t offset = 0;
    auto nll_term = [&](const LinearHead& head, int target) {
      HeadEval eval = eval_head(head, x);
      loss -= inv_n * eval.logp[target];
      std::vector<double> coefs(eval.probs);
      coefs[target] -= 1.0;  // d(-logp)/dlogits = p - onehot
      for (double& c : coefs) c *= inv_n;
      add_outer(grad, offset, head, coefs, x);
      offset += head.weights.size();
    };
    nll_term(policy_.length_head, bucket);
    nll_term(policy_.prompt_head, label_class(sample->prompt_label));
    if (sample->response_label.has_value()) {
      nll_term(policy_.response_head, label_class(*sample->response_label));
    }
  }
  apply_update(grad, learning_rate);
  return loss;
}

void Trainer::run_sft(const Dataset& data, int epochs, double learning_rate,
                      int batch_size) {
  if (data.samples.empty()) fail(ErrorKind::kEmptyInput, "empty SFT dataset");
  if (batch_size < 1) fail(ErrorKind::kConfigError, "sft.batch_size must be >= 1");
  std::vector<const Sample*> order;
  order.reserve(data.samples.size());
  for (const Sample& s : data.samples) order.push_back(&s);
  Rng rng(derive_seed(config_.seed, "sft-order"));
  int step = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t begin = 0; begin < order.size();
         begin += static_cast<std::size_t>(batch_size)) {
      std::size_t end =
          std::min(order.size(), begin + static_cast<std::size_t>(batch_size));
      std::span<const Sample* const> batch(order.data() + begin, end - begin);
      double loss = sft_step(batch, learning_rate);
      double token_sum = 0.0;
      for (const Sample* s : batch) {
        std::string think;
        for (std::size_t i = 0; i < s->reasoning->size(); ++i) {
          if (i > 0) think += '\n';
          think += (*s->reasoning)[i];
        }
        token_sum += static_cast<double>(count_tokens(think));
      }
      StepMetrics m;
      m.step = step++;
      m.mean_reward = 0.0;  // gold targets score r_safety = 1 by definition
      m.mean_reasoning_tokens = token_sum / static_cast<double>(batch.size());
      m.loss = loss;
      m.clip_bound = 0.0;
      history_.push_back(m);
    }
  }
}

void Trainer::snapshot() {
  old_policy_ = policy_;
  has_snapshot_ = true;
}

StepMetrics Trainer::rl_step(std::span<const Sample* const> batch) {
  if (!has_snapshot_) {
    fail(ErrorKind::kStateError, "rl_step called before snapshot()");
  }
  if (batch.empty()) fail(ErrorKind::kEmptyInput, "empty RL batch");
  double bound = clip_bound(std::min(step_, config_.s_total),
                            ClipSchedule{config_.epsilon, config_.s_total});

  std::vector<RolloutGroup> groups(batch.size());
  std::vector<double> losses(batch.size(), 0.0);
  std::vector<PolicyGrad> grads;
  grads.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) grads.emplace_back(policy_);

  parallel_for(batch.size(), config_.threads, [&](std::size_t i) {
    const Sample& sample = *batch[i];
    RolloutGroup& group = groups[i];
    group.sample = &sample;
    Rng rng(derive_seed(config_.seed, "rollout:" + std::to_string(step_) +
                                          ":" + sample.id));
    group.outputs = act_group(old_policy_, sample, config_.group_size,
                              config_.temperature, rng);
    group.old_log_probs.reserve(group.outputs.size());
    group.rewards.reserve(group.outputs.size());
    for (const PolicyOutput& out : group.outputs) {
      group.old_log_probs.push_back(out.log_prob);
      ReasoningOutput parsed =
          parse_output(render_output(out), sample.has_response());
      RewardBreakdown breakdown = score_output(
          parsed, sample.prompt_label, sample.response_label, reward_);
      group.rewards.push_back(breakdown.final_reward);
    }
    group.advantages = group_advantages(group.rewards);
    losses[i] = surrogate_loss_and_grad(policy_, group, bound, &grads[i]);
  });

  // Deterministic reduction in sample order.
  PolicyGrad total(policy_);
  double loss = 0.0;
  double inv_n = 1.0 / static_cast<double>(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    loss += inv_n * losses[i];
    for (std::size_t j = 0; j < total.values.size(); ++j) {
      total.values[j] += inv_n * grads[i].values[j];
    }
  }
  apply_update(total, config_.lr);

  double reward_sum = 0.0;
  double token_sum = 0.0;
  std::size_t rollouts = 0;
  for (const RolloutGroup& group : groups) {
    for (std::size_t i = 0; i < group.outputs.size(); ++i) {
      reward_sum += group.rewards[i];
      token_sum += static_cast<double>(group.outputs[i].reasoning_tokens);
      ++rollouts;
    }
  }
  StepMetrics m;
  m.step = step_;
  m.mean_reward = reward_sum / static_cast<double>(rollouts);
  m.mean_reasoning_tokens = token_sum / static_cast<double>(rollouts);
  m.loss = loss;
  m.clip_bound = bound;
  history_.push_back(m);
  ++step_;
  return m;
}

void Trainer::run_rl(const Dataset& data, int n_steps) {
  if (data.samples.empty()) fail(ErrorKind::kEmptyInput, "empty RL dataset");
  std::vector<const Sample*> order;
  order.reserve(data.samples.size());
  for (const Sample& s : data.samples) order.push_back(&s);
  Rng rng(derive_seed(config_.seed, "rl-order"));

  std::vector<const Sample*> window;
  std::size_t cursor = order.size();  // force an initial shuffle
  int done = 0;
  while (done < n_steps) {
    // Next rollout batch, refreshing the epoch order as needed.
    window.clear();
    while (window.size() < static_cast<std::size_t>(config_.rollout_batch)) {
      if (cursor >= order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      window.push_back(order[cursor++]);
    }
    snapshot();
    for (std::size_t begin = 0; begin < window.size() && done < n_steps;
         begin += static_cast<std::size_t>(config_.actor_batch)) {
      std::size_t end = std::min(window.size(),
                                 begin + static_cast<std::size_t>(config_.actor_batch));
      rl_step(std::span<const Sample* const>(window.data() + begin, end - begin));
      ++done;
    }
  }
}

}  // namespace guardlab
