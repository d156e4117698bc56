// Copyright 2026 The riccinets Authors
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

#ifndef RICCINETS_CONTROLLER_HPP
#define RICCINETS_CONTROLLER_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "riccinets/curvature.hpp"
#include "riccinets/graph.hpp"
#include "riccinets/rng.hpp"

namespace riccinets {

inline constexpr std::size_t kNumHeads = 3;  // alpha, beta, delta

struct PolicyConfig {
  std::size_t bins = 11;
  std::size_t hidden = 32;
  std::size_t input_dim = 4;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

/// One sampled hyperparameter state.
struct Action {
  std::array<std::size_t, kNumHeads> bin{};
  double log_prob = 0.0;

  friend bool operator==(const Action& a, const Action& b) {
    return a.bin == b.bin;
  }
};

/// Feed-forward controller: constant all-ones input, one tanh hidden layer,
/// then three categorical heads sampled in order. The beta head sees the
/// one-hot alpha bin and the delta head sees the one-hot beta bin; delta
/// bins with beta + delta > 1 are masked out.
///
/// Parameters live in one flat vector:
///   W1 (hidden x input), b1 (hidden),
///   U0 (bins x hidden), c0 (bins),
///   U1 (bins x (hidden+bins)), c1 (bins),
///   U2 (bins x (hidden+bins)), c2 (bins).
/// Hidden weights start uniform in +-1/sqrt(input); head weights start at
/// zero so every head is initially uniform.
class PolicyState {
 public:
  PolicyState() = default;
  explicit PolicyState(const PolicyConfig& config);

  const PolicyConfig& config() const { return config_; }
  std::size_t bins() const { return config_.bins; }
  double bin_value(std::size_t b) const;
  std::vector<double> bin_values() const;

  std::span<const double> params() const { return params_; }
  std::span<double> mutable_params() { return params_; }
  std::size_t param_count() const { return params_.size(); }

  /// Head distribution given the previous head's bin (ignored for head 0).
  std::vector<double> head_probs(std::size_t head, std::size_t prev_bin) const;
  /// Feasible delta bins given the beta bin.
  std::vector<char> delta_mask(std::size_t beta_bin) const;

  double log_prob(const Action& a) const;
  /// d log P(a) / d params.
  std::vector<double> grad_log_prob(const Action& a) const;

  MassParams to_mass_params(const Action& a) const;

 private:
  struct Layout {
    std::size_t w1, b1, u[kNumHeads], c[kNumHeads], total;
  };
  std::vector<double> hidden() const;
  std::vector<double> logits(std::size_t head, const std::vector<double>& h,
                             std::size_t prev_bin) const;
  std::size_t head_width(std::size_t head) const;

  PolicyConfig config_;
  Layout layout_{};
  std::vector<double> params_;
};

/// Samples one bin per head with one rng.uniform() draw per head.
Action sample_action(const PolicyState& policy, Rng& rng);

struct Reward {
  double accuracy = 0.0;
  double flops = 0.0;
  double flops_baseline = 1.0;
  double mu = 0.0;
  double value = 0.0;
};

/// J = A - mu * F / F_baseline.
Reward compute_reward(double accuracy, double flops, double flops_baseline,
                      double mu);

/// v_c = sum_k gamma^k J_{c+k} over the remainder of the episode.
std::vector<double> discounted_return(std::span<const double> rewards,
                                      double gamma);

struct StepRecord {
  Action action;
  MassParams params;
  double accuracy = 0.0;
  double flops_ratio = 0.0;
  double reward = 0.0;
  double ret = 0.0;
  bool failed = false;
};

struct EpisodeLog {
  std::size_t episode = 0;
  std::size_t batch = 0;
  std::vector<StepRecord> steps;
};

struct UpdateResult {
  PolicyState policy;
  bool skipped = false;
};

/// Gradient ascent on (1/m) sum_episodes sum_steps grad log P(a) * return.
/// A non-finite gradient leaves the policy untouched and sets `skipped`.
UpdateResult reinforce_update(const PolicyState& policy,
                              std::span<const EpisodeLog> batch);
std::vector<double> reinforce_gradient(const PolicyState& policy,
                                       std::span<const EpisodeLog> batch);

/// Outcome of turning one hyperparameter state into an evaluated network.
struct StepOutcome {
  double accuracy = 0.0;
  double flops = 0.0;
  double flops_baseline = 1.0;
  bool failed = false;
  std::string note;

  double flops_ratio() const { return flops / flops_baseline; }
};

using StepEvaluator = std::function<StepOutcome(const MassParams&)>;

struct SearchConfig {
  std::size_t episodes = 20;
  std::size_t steps = 5;
  std::size_t batch = 2;
  double discount = 0.9;
  double mu = 0.0;
  PolicyConfig policy;
};

struct SearchResult {
  MassParams best;
  double best_reward = 0.0;
  std::size_t best_episode = 0;
  std::size_t best_step = 0;
  std::vector<EpisodeLog> history;
  PolicyState final_policy;
  std::size_t skipped_updates = 0;
};

/// Runs episodes x steps controller rollouts against `evaluate`, updating the
/// policy after every `batch` episodes (a trailing partial batch is also
/// used). The best state is the highest-reward step among those that did not
/// fail (all steps when every one failed).
SearchResult run_search(const SearchConfig& config,
                        const StepEvaluator& evaluate);

/// "episode,step,alpha,beta,delta,accuracy,flops_ratio,reward,return".
std::string format_history_csv(std::span<const EpisodeLog> history);

}  // namespace riccinets

#endif  // RICCINETS_CONTROLLER_HPP
