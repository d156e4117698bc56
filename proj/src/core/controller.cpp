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

#include "riccinets/controller.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "riccinets/error.hpp"

namespace riccinets {

PolicyState::PolicyState(const PolicyConfig& config) : config_(config) {
  if (config_.bins < 2) {
    throw Error(ErrorCode::kParameter, "the controller needs at least 2 bins");
  }
  if (config_.hidden == 0 || config_.input_dim == 0) {
    throw Error(ErrorCode::kParameter, "hidden and input widths must be positive");
  }
  const std::size_t B = config_.bins;
  const std::size_t H = config_.hidden;
  const std::size_t I = config_.input_dim;
  std::size_t off = 0;
  layout_.w1 = off;
  off += H * I;
  layout_.b1 = off;
  off += H;
  for (std::size_t t = 0; t < kNumHeads; ++t) {
    layout_.u[t] = off;
    off += B * head_width(t);
    layout_.c[t] = off;
    off += B;
  }
  layout_.total = off;
  params_.assign(off, 0.0);

  Rng rng(config_.seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(I));
  for (std::size_t i = 0; i < H * I + H; ++i) {
    params_[layout_.w1 + i] = (2.0 * rng.uniform() - 1.0) * scale;
  }
}

std::size_t PolicyState::head_width(std::size_t head) const {
  return head == 0 ? config_.hidden : config_.hidden + config_.bins;
}

double PolicyState::bin_value(std::size_t b) const {
  if (b >= config_.bins) throw Error(ErrorCode::kParameter, "bin out of range");
  return static_cast<double>(b) / static_cast<double>(config_.bins - 1);
}

std::vector<double> PolicyState::bin_values() const {
  std::vector<double> v(config_.bins);
  for (std::size_t b = 0; b < v.size(); ++b) v[b] = bin_value(b);
  return v;
}

std::vector<double> PolicyState::hidden() const {
  const std::size_t H = config_.hidden;
  const std::size_t I = config_.input_dim;
  std::vector<double> h(H);
  for (std::size_t j = 0; j < H; ++j) {
    double s = params_[layout_.b1 + j];
    for (std::size_t i = 0; i < I; ++i) s += params_[layout_.w1 + j * I + i];
    h[j] = std::tanh(s);
  }
  return h;
}

std::vector<double> PolicyState::logits(std::size_t head,
                                        const std::vector<double>& h,
                                        std::size_t prev_bin) const {
  const std::size_t B = config_.bins;
  const std::size_t H = config_.hidden;
  const std::size_t width = head_width(head);
  std::vector<double> z(B);
  for (std::size_t b = 0; b < B; ++b) {
    const double* row = params_.data() + layout_.u[head] + b * width;
    double s = params_[layout_.c[head] + b];
    for (std::size_t j = 0; j < H; ++j) s += row[j] * h[j];
    if (head > 0) s += row[H + prev_bin];
    z[b] = s;
  }
  return z;
}

std::vector<char> PolicyState::delta_mask(std::size_t beta_bin) const {
  std::vector<char> mask(config_.bins, 0);
  const double beta = bin_value(beta_bin);
  bool any = false;
  for (std::size_t b = 0; b < config_.bins; ++b) {
    mask[b] = beta + bin_value(b) <= 1.0 + 1e-12;
    any = any || mask[b];
  }
  if (!any) mask[0] = 1;
  return mask;
}

namespace {

std::vector<double> masked_softmax(const std::vector<double>& z,
                                   const std::vector<char>* mask) {
  double mx = -INFINITY;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (!mask || (*mask)[i]) mx = std::max(mx, z[i]);
  std::vector<double> p(z.size(), 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    p[i] = std::exp(z[i] - mx);
    s += p[i];
  }
  for (double& v : p) v /= s;
  return p;
}

}  // namespace

std::vector<double> PolicyState::head_probs(std::size_t head,
                                            std::size_t prev_bin) const {
  if (head >= kNumHeads || prev_bin >= config_.bins) {
    throw Error(ErrorCode::kParameter, "head or bin out of range");
  }
  const auto z = logits(head, hidden(), prev_bin);
  if (head == 2) {
    const auto mask = delta_mask(prev_bin);
    return masked_softmax(z, &mask);
  }
  return masked_softmax(z, nullptr);
}

double PolicyState::log_prob(const Action& a) const {
  const auto h = hidden();
  double lp = 0.0;
  for (std::size_t t = 0; t < kNumHeads; ++t) {
    const std::size_t prev = t == 0 ? 0 : a.bin[t - 1];
    const auto z = logits(t, h, prev);
    std::vector<double> p;
    if (t == 2) {
      const auto mask = delta_mask(prev);
      p = masked_softmax(z, &mask);
    } else {
      p = masked_softmax(z, nullptr);
    }
    lp += std::log(p.at(a.bin[t]));
  }
  return lp;
}

std::vector<double> PolicyState::grad_log_prob(const Action& a) const {
  const std::size_t B = config_.bins;
  const std::size_t H = config_.hidden;
  const std::size_t I = config_.input_dim;
  const auto h = hidden();
  std::vector<double> g(params_.size(), 0.0);
  std::vector<double> dh(H, 0.0);

  for (std::size_t t = 0; t < kNumHeads; ++t) {
    const std::size_t prev = t == 0 ? 0 : a.bin[t - 1];
    const auto z = logits(t, h, prev);
    std::vector<double> p;
    if (t == 2) {
      const auto mask = delta_mask(prev);
      p = masked_softmax(z, &mask);
    } else {
      p = masked_softmax(z, nullptr);
    }
    const std::size_t width = head_width(t);
    for (std::size_t b = 0; b < B; ++b) {
      // Masked bins have p = 0 and never match the action: zero gradient.
      const double dz = (b == a.bin[t] ? 1.0 : 0.0) - p[b];
      if (dz == 0.0) continue;
      const std::size_t row = layout_.u[t] + b * width;
      for (std::size_t j = 0; j < H; ++j) {
        g[row + j] += dz * h[j];
        dh[j] += dz * params_[row + j];
      }
      if (t > 0) g[row + H + prev] += dz;
      g[layout_.c[t] + b] += dz;
    }
  }
  for (std::size_t j = 0; j < H; ++j) {
    const double dpre = dh[j] * (1.0 - h[j] * h[j]);
    g[layout_.b1 + j] += dpre;
    for (std::size_t i = 0; i < I; ++i) g[layout_.w1 + j * I + i] += dpre;
  }
  return g;
}

MassParams PolicyState::to_mass_params(const Action& a) const {
  MassParams p{bin_value(a.bin[0]), bin_value(a.bin[1]), bin_value(a.bin[2])};
  // Grid values like 0.3 + 0.7 can round a hair above 1.
  if (p.beta + p.delta > 1.0) p.delta = 1.0 - p.beta;
  return p;
}

Action sample_action(const PolicyState& policy, Rng& rng) {
  Action a;
  for (std::size_t t = 0; t < kNumHeads; ++t) {
    const std::size_t prev = t == 0 ? 0 : a.bin[t - 1];
    const auto p = policy.head_probs(t, prev);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t pick = p.size();
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (p[b] <= 0.0) continue;
      acc += p[b];
      pick = b;
      if (u < acc) break;
    }
    a.bin[t] = pick;
  }
  a.log_prob = policy.log_prob(a);
  return a;
}

Reward compute_reward(double accuracy, double flops, double flops_baseline,
                      double mu) {
  if (!(flops_baseline > 0.0)) {
    throw Error(ErrorCode::kParameter, "baseline FLOPs must be positive");
  }
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw Error(ErrorCode::kParameter, "accuracy must lie in [0,1]");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu) || !(flops >= 0.0)) {
    throw Error(ErrorCode::kParameter, "mu and FLOPs must be finite and >= 0");
  }
  Reward r{accuracy, flops, flops_baseline, mu, 0.0};
  r.value = accuracy - mu * flops / flops_baseline;
  return r;
}

std::vector<double> discounted_return(std::span<const double> rewards,
                                      double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::kParameter, "discount must lie in [0,1]");
  }
  std::vector<double> v(rewards.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = rewards.size(); i-- > 0;) {
    acc = rewards[i] + gamma * acc;
    v[i] = acc;
  }
  return v;
}

std::vector<double> reinforce_gradient(const PolicyState& policy,
                                       std::span<const EpisodeLog> batch) {
  std::vector<double> g(policy.param_count(), 0.0);
  if (batch.empty()) return g;
  for (const EpisodeLog& ep : batch) {
    for (const StepRecord& s : ep.steps) {
      if (s.ret == 0.0) continue;
      const auto gl = policy.grad_log_prob(s.action);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += gl[i] * s.ret;
    }
  }
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  for (double& v : g) v *= inv_m;
  return g;
}

UpdateResult reinforce_update(const PolicyState& policy,
                              std::span<const EpisodeLog> batch) {
  UpdateResult out{policy, false};
  const auto g = reinforce_gradient(policy, batch);
  for (double v : g) {
    if (!std::isfinite(v)) {
      out.skipped = true;
      return out;
    }
  }
  auto params = out.policy.mutable_params();
  const double lr = policy.config().learning_rate;
  for (std::size_t i = 0; i < params.size(); ++i) params[i] += lr * g[i];
  return out;
}

SearchResult run_search(const SearchConfig& config,
                        const StepEvaluator& evaluate) {
  if (config.episodes == 0 || config.steps == 0 || config.batch == 0) {
    throw Error(ErrorCode::kParameter,
                "episodes, steps and batch size must be positive");
  }
  if (!(config.mu >= 0.0)) {
    throw Error(ErrorCode::kParameter, "mu must be >= 0");
  }
  SearchResult result;
  PolicyState policy(config.policy);
  Rng rng(derive_seed(config.policy.seed, 0x5eed));

  std::vector<EpisodeLog> pending;
  bool have_best = false;
  bool best_failed = true;
  for (std::size_t ep = 0; ep < config.episodes; ++ep) {
    EpisodeLog log;
    log.episode = ep;
    log.batch = ep / config.batch;
    std::vector<double> rewards;
    for (std::size_t st = 0; st < config.steps; ++st) {
      StepRecord rec;
      rec.action = sample_action(policy, rng);
      rec.params = policy.to_mass_params(rec.action);
      StepOutcome out;
      try {
        out = evaluate(rec.params);
      } catch (const std::exception& e) {
        out = StepOutcome{0.0, 0.0, 1.0, true, e.what()};
      }
      rec.failed = out.failed;
      if (out.failed) {
        rec.accuracy = 0.0;
        rec.flops_ratio = 0.0;
        rec.reward = 0.0;
      } else {
        rec.accuracy = out.accuracy;
        rec.flops_ratio = out.flops_ratio();
        rec.reward = compute_reward(out.accuracy, out.flops,
                                    out.flops_baseline, config.mu)
                         .value;
      }
      rewards.push_back(rec.reward);

      const bool better =
          !have_best || (best_failed && !rec.failed) ||
          (best_failed == rec.failed && rec.reward > result.best_reward);
      if (better) {
        have_best = true;
        best_failed = rec.failed;
        result.best = rec.params;
        result.best_reward = rec.reward;
        result.best_episode = ep;
        result.best_step = st;
      }
      log.steps.push_back(rec);
    }
    const auto returns = discounted_return(rewards, config.discount);
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
      log.steps[i].ret = returns[i];
    }
    result.history.push_back(log);
    pending.push_back(log);
    if (pending.size() == config.batch || ep + 1 == config.episodes) {
      auto upd = reinforce_update(policy, pending);
      if (upd.skipped) ++result.skipped_updates;
      policy = std::move(upd.policy);
      pending.clear();
    }
  }
  result.final_policy = std::move(policy);
  return result;
}

std::string format_history_csv(std::span<const EpisodeLog> history) {
  std::string out =
      "episode,step,alpha,beta,delta,accuracy,flops_ratio,reward,return\n";
  char buf[320];
  for (const EpisodeLog& ep : history) {
    for (std::size_t s = 0; s < ep.steps.size(); ++s) {
      const StepRecord& r = ep.steps[s];
      std::snprintf(buf, sizeof buf,
                    "%zu,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    ep.episode, s, r.params.alpha, r.params.beta,
                    r.params.delta, r.accuracy, r.flops_ratio, r.reward, r.ret);
      out += buf;
    }
  }
  return out;
}

}  // namespace riccinets
