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

#ifndef GUARDLAB_TRAINER_HPP_
#define GUARDLAB_TRAINER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "guardlab/policy.hpp"
#include "guardlab/reward.hpp"
#include "guardlab/types.hpp"

namespace guardlab {

struct ClipSchedule {
  double epsilon = 0.2;
  int s_total = 500;
};

// B_s = epsilon * prod_{i=1..s} (s_total - i) / s_total. The empty product
// makes B_0 = epsilon; the i = s_total factor makes B_{s_total} exactly 0.
// Throws StepOutOfRange outside [0, s_total].
double clip_bound(int s, const ClipSchedule& schedule);

// Standardizes a reward group to zero mean and unit population std; groups
// with population std below 1e-6 map to all-zero advantages. Throws
// GroupTooSmall for fewer than 2 rewards.
std::vector<double> group_advantages(std::span<const double> rewards);

// Clipped surrogate: -(1/G) sum_i min(K_i*A_i, clip(K_i, 1-B, 1+B)*A_i).
double surrogate_loss(std::span<const double> ratios,
                      std::span<const double> advantages, double bound);

// One group of rollouts for a sample, with everything the objective needs.
struct RolloutGroup {
  const Sample* sample = nullptr;
  std::vector<PolicyOutput> outputs;     // sampled under the snapshot policy
  std::vector<double> old_log_probs;     // log P_old at temperature 1
  std::vector<double> rewards;           // length-aware rewards
  std::vector<double> advantages;
};

// Per-sample surrogate loss under `policy` (ratios against the group's
// recorded old log-probs) and, when grad is non-null, its exact gradient
// accumulated into grad. Exposed so the gradient can be checked against
// finite differences.
double surrogate_loss_and_grad(const ToyPolicy& policy, const RolloutGroup& group,
                               double bound, PolicyGrad* grad);

struct TrainerConfig {
  int group_size = 16;      // rollouts per sample
  double epsilon = 0.2;
  int s_total = 500;
  double temperature = 1.2;
  double lr = 0.05;
  double weight_decay = 0.01;
  double momentum = 0.0;
  int rollout_batch = 64;   // samples per snapshot window
  int actor_batch = 32;     // samples per optimizer update
  std::uint64_t seed = 1;
  int threads = 0;

  void validate() const;
};

struct StepMetrics {
  int step = 0;
  double mean_reward = 0.0;
  double mean_reasoning_tokens = 0.0;
  double loss = 0.0;
  double clip_bound = 0.0;
};

// Runs reasoning SFT and the KL-free group-relative RL loop over a toy
// policy. The snapshot policy is refreshed once per rollout batch; rollouts
// are always sampled from the snapshot. Identical seeds and config give a
// bit-identical metric history.
class Trainer {
 public:
  Trainer(ToyPolicy& policy, const TrainerConfig& config,
          const RewardConfig& reward);

  // Mean NLL of the gold bucket/labels over the batch plus one update.
  double sft_step(std::span<const Sample* const> batch, double learning_rate);

  // Epoch-shuffled SFT over a dataset; every sample must carry gold
  // reasoning. Appends one metrics row per optimizer update.
  void run_sft(const Dataset& data, int epochs, double learning_rate,
               int batch_size);

  void snapshot();  // theta_old <- theta

  // One optimization batch: G rollouts per sample from the snapshot,
  // length-aware rewards, group-standardized advantages, clipped surrogate
  // with B = clip_bound(step), one optimizer update.
  StepMetrics rl_step(std::span<const Sample* const> batch);

  // Epoch-shuffled RL driver for n_steps optimizer updates.
  void run_rl(const Dataset& data, int n_steps);

  const std::vector<StepMetrics>& history() const { return history_; }
  int step() const { return step_; }

 private:
  void apply_update(const PolicyGrad& grad, double learning_rate);

  ToyPolicy& policy_;
  ToyPolicy old_policy_;
  TrainerConfig config_;
  RewardConfig reward_;
  std::vector<double> velocity_;
  std::vector<StepMetrics> history_;
  int step_ = 0;
  bool has_snapshot_ = false;
};

}  // namespace guardlab

#endif  // GUARDLAB_TRAINER_HPP_
