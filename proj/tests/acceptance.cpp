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


// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "riccinets/controller.hpp"
#include "riccinets/curvature.hpp"
#include "riccinets/error.hpp"
#include "riccinets/evaluator.hpp"
#include "riccinets/flow.hpp"
#include "riccinets/graph.hpp"
#include "riccinets/harness.hpp"
#include "riccinets/rng.hpp"

using namespace riccinets;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kTransportTol = 1e-9;
constexpr double kTransportSeconds = 10.0;
constexpr double kMassSumTol = 1e-12;
constexpr double kKappaTol = 1e-12;
constexpr double kFlowConvergence = 1e-4;
constexpr int kFlowMaxIter = 50;
constexpr int kFlowSeedsRequired = 8;
constexpr double kFlowSumTol = 1e-9;
constexpr double kFlowSecondsPerSeed = 60.0;
constexpr double kRatioLo = 0.50;
constexpr double kRatioHi = 0.95;
constexpr double kMinMeanReduction = 0.15;
constexpr double kPolicyGradEps = 1e-5;
constexpr double kPolicyGradTol = 1e-5;
constexpr double kSearchSeconds = 300.0;
constexpr double kBackpropEps = 1e-6;
constexpr double kBackpropTol = 1e-4;
constexpr double kChanceBand = 0.1;
constexpr double kTransferShare = 0.75;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, const char* fmt = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<oracle::RawEdge> raw(const Graph& g) {
  std::vector<oracle::RawEdge> out;
  for (const Edge& e : g.edges()) out.push_back({e.u, e.v, e.w});
  return out;
}

MassParams random_params(Rng& rng) {
  MassParams p;
  p.alpha = rng.uniform();
  p.beta = rng.uniform();
  p.delta = rng.uniform() * (1.0 - p.beta);
  return p;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("riccinets_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

Verdict transport_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  double worst = 0.0;
  int instances = 0;
  for (; instances < 200; ++instances) {
    const std::size_t n = 4 + rng.below(7);
    Graph g = ws_generate({n, 2, rng.uniform(), rng.next()});
    if (!g.is_connected()) g = largest_component(g);
    std::vector<double> w(g.edge_count());
    for (double& x : w) x = 1.0 + static_cast<double>(rng.below(4));
    g = g.with_weights(w);
    const auto d = all_pairs_shortest_paths(g);
    const auto bf = oracle::bellman_ford_all_pairs(g.node_count(), raw(g));
    auto measure = [&](std::vector<int>& units) {
      const std::size_t size = 1 + rng.below(std::min<std::size_t>(5, g.node_count()));
      std::vector<NodeId> nodes(g.node_count());
      for (NodeId i = 0; i < nodes.size(); ++i) nodes[i] = i;
      rng.shuffle(nodes);
      units.assign(size, 1);
      for (int left = 16 - static_cast<int>(size); left > 0; --left) ++units[rng.below(size)];
      MassDistribution m;
      m.center = nodes[0];
      for (std::size_t i = 0; i < size; ++i) m.support.push_back({nodes[i], units[i] / 16.0});
      return m;
    };
    std::vector<int> su, du;
    const auto a = measure(su), b = measure(du);
    std::vector<double> cost;
    for (const MassPoint& p : a.support)
      for (const MassPoint& q : b.support) cost.push_back(bf[p.node][q.node]);
    const double expected = oracle::min_cost_flow(su, du, cost) / 16.0;
    worst = std::max(worst, std::abs(wasserstein(d, a, b) - expected));
  }
  const double secs = seconds_since(t0);
  return {worst <= kTransportTol && secs < kTransportSeconds,
          std::to_string(instances) + " instances, max |W - oracle| = " + num(worst) +
              ", " + num(secs, "%.2f") + " s"};
}

Verdict mass_normalization() {
  Rng rng(202);
  double worst = 0.0;
  bool dirac = true;
  for (int draw = 0; draw < 1000; ++draw) {
    const Dag dag = to_dag(largest_component(
        ws_generate({6 + rng.below(27), 2 + 2 * rng.below(2), rng.uniform(), rng.next()})));
    const NodeId x = static_cast<NodeId>(rng.below(dag.graph().node_count()));
    MassParams p = random_params(rng);
    if (draw % 10 == 0) p.alpha = 1.0;
    const auto m = mass_distribution(dag, x, p);
    worst = std::max(worst, std::abs(m.total() - 1.0));
    if (p.alpha == 1.0 && m.mass_of(x) != 1.0) dirac = false;
  }
  return {worst <= kMassSumTol && dirac,
          "1000 draws, max |sum - 1| = " + num(worst) +
              (dirac ? ", alpha=1 all on centre" : ", alpha=1 leaked mass")};
}

Verdict curvature_sanity() {
  Rng rng(303);
  double max_kappa = -INFINITY;
  std::size_t graphs = 0;
  for (std::uint64_t seed = 0; graphs < 50; ++seed) {
    const Graph g = ws_generate({32, 4, 0.75, seed});
    if (!g.is_connected()) continue;
    ++graphs;
    for (const EdgeCurvature& e : compute_curvature(to_dag(g), random_params(rng)).edges) {
      max_kappa = std::max(max_kappa, e.kappa);
    }
  }
  bool dirac_zero = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dag dag = to_dag(largest_component(ws_generate({32, 4, 0.75, seed})));
    for (const EdgeCurvature& e : compute_curvature(dag, {1.0, 0.6, 0.2}).edges) {
      dirac_zero = dirac_zero && e.kappa == 0.0;
    }
  }
  // Both ends of a lone edge with alpha = 0.5 hold the same two-point measure.
  const Graph k2(2, false, {{0, 1, 1}});
  const auto stats = DegreeStats::of(k2);
  const auto d = all_pairs_shortest_paths(k2);
  const double same = ollivier_ricci(k2, stats, d, 0, 1, {0.5, 1.0, 0.0}).kappa;
  const bool pass = max_kappa <= 1.0 + kKappaTol && dirac_zero &&
                    std::abs(same - 1.0) <= kKappaTol;
  return {pass, std::to_string(graphs) + " graphs, max kappa = " + num(max_kappa) +
                    ", Dirac kappa " + (dirac_zero ? "= 0" : "!= 0") +
                    ", identical-measure kappa = " + num(same)};
}

Verdict flow_behaviour() {
  int converged = 0;
  double worst_sum = 0.0, worst_secs = 0.0;
  std::string iters;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Dag dag = to_dag(largest_component(ws_generate({32, 4, 0.75, seed})));
    int it = -1;
    try {
      const FlowState s = run_flow(dag, MassParams{}, kFlowMaxIter, kFlowConvergence);
      for (const FlowTraceRow& r : s.trace) {
        worst_sum = std::max(worst_sum, std::abs(r.sum_w - s.target_sum));
      }
      if (s.converged && s.max_delta < kFlowConvergence) ++converged;
      it = s.converged ? s.iteration : -1;
    } catch (const Error&) {
    }
    iters += (iters.empty() ? "" : " ") + (it < 0 ? std::string("x") : std::to_string(it));
    worst_secs = std::max(worst_secs, seconds_since(t0));
  }
  return {converged >= kFlowSeedsRequired && worst_sum <= kFlowSumTol &&
              worst_secs < kFlowSecondsPerSeed,
          std::to_string(converged) + "/10 seeds converged (iterations: " + iters +
              "), max |sum w drift| = " + num(worst_sum) + ", slowest seed " +
              num(worst_secs, "%.2f") + " s"};
}

Verdict compression() {
  int in_range = 0;
  double sum_ratio = 0.0;
  double lo = INFINITY, hi = -INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dag dag = to_dag(largest_component(ws_generate({32, 4, 0.75, seed})));
    double ratio = 0.0;  // an emptied network counts as ratio 0
    try {
      ratio = prune(run_flow(dag, MassParams{})).flops_ratio();
    } catch (const Error&) {
    }
    sum_ratio += ratio;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    if (ratio >= kRatioLo && ratio <= kRatioHi) ++in_range;
  }
  const double mean_reduction = 1.0 - sum_ratio / 20.0;
  return {in_range == 20 && mean_reduction >= kMinMeanReduction,
          std::to_string(in_range) + "/20 seeds with FLOPs ratio in [0.50, 0.95] (range " +
              num(lo, "%.3f") + "-" + num(hi, "%.3f") + "), mean reduction " +
              num(100.0 * mean_reduction, "%.1f") +
              "%; full-scale reference: almost 35% reduction, 68-91% of dense FLOPs"};
}

Verdict policy_gradient() {
  Rng rng(606);
  double worst = 0.0;
  bool increased = true;
  for (int state = 0; state < 10; ++state) {
    PolicyConfig cfg;
    cfg.seed = 700 + static_cast<std::uint64_t>(state);
    PolicyState p(cfg);
    for (double& v : p.mutable_params()) v += 0.3 * rng.normal();
    const Action a = sample_action(p, rng);
    const auto g = p.grad_log_prob(a);
    auto params = p.mutable_params();
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double keep = params[i];
      params[i] = keep + kPolicyGradEps;
      const double up = p.log_prob(a);
      params[i] = keep - kPolicyGradEps;
      const double down = p.log_prob(a);
      params[i] = keep;
      const double fd = (up - down) / (2 * kPolicyGradEps);
      worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
    }
    EpisodeLog ep;
    StepRecord s;
    s.action = a;
    s.ret = 1.0;
    ep.steps.push_back(s);
    const std::vector<EpisodeLog> batch{ep};
    increased = increased && reinforce_update(p, batch).policy.log_prob(a) > p.log_prob(a);
  }
  return {worst <= kPolicyGradTol && increased,
          "10 states, max relative gradient error = " + num(worst) +
              (increased ? ", rewarded action gained probability" : ", update failed to help")};
}

Verdict end_to_end_search() {
  RunConfig c;
  c.evaluator = EvaluatorKind::kSurrogate;
  c.episodes = 20;
  c.batch = 2;
  c.out = scratch("search");
  const auto t0 = std::chrono::steady_clock::now();
  SearchResult r;
  cmd_search(c, &r);
  const double secs = seconds_since(t0);
  const std::string first = read_text_file(c.out / "history.csv");
  cmd_search(c);
  const bool identical = read_text_file(c.out / "history.csv") == first;
  fs::remove_all(c.out);
  double ep1 = 0.0;
  for (const StepRecord& s : r.history.at(0).steps) ep1 += s.reward;
  ep1 /= static_cast<double>(r.history.at(0).steps.size());
  return {secs < kSearchSeconds && r.best_reward >= ep1 && identical,
          "20 episodes in " + num(secs, "%.2f") + " s, best reward " + num(r.best_reward) +
              " vs episode-1 mean " + num(ep1) +
              (identical ? ", rerun history identical" : ", rerun history differs")};
}

Verdict trainer() {
  const Dataset tiny = make_dataset(8, {8, 3, 6, 3});
  Rng rng(808);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const Dag dag = to_dag(largest_component(
        ws_generate({5 + rng.below(5), 2 + 2 * rng.below(2), rng.uniform(), rng.next()})));
    TinyNet net = build_network(dag, 4, 6, 3, rng.next());
    auto params = net.mutable_params();
    for (double& v : params) v += 0.2 * (rng.uniform() - 0.5);
    std::vector<double> grad;
    net.loss(tiny.train_x, tiny.train_y, &grad);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double keep = params[i];
      params[i] = keep + kBackpropEps;
      const double up = net.loss(tiny.train_x, tiny.train_y, nullptr);
      params[i] = keep - kBackpropEps;
      const double down = net.loss(tiny.train_x, tiny.train_y, nullptr);
      params[i] = keep;
      const double fd = (up - down) / (2 * kBackpropEps);
      worst = std::max(worst, std::abs(grad[i] - fd) / std::max(1.0, std::abs(fd)));
    }
  }

  const Dataset data = make_dataset(0);
  const Dag dag = to_dag(largest_component(ws_generate({32, 4, 0.75, 0})));
  TinyNet untrained = build_network(dag, 8, 16, 3, network_seed(0));
  const double chance = train_eval(untrained, data, {0, 64, 0.05}).accuracy;
  TinyNet trained = build_network(dag, 8, 16, 3, network_seed(0));
  const double acc = train_eval(trained, data).accuracy;
  const double kept = evaluate_network(magnitude_prune(trained, 0.0), data).accuracy;

  const bool pass = worst <= kBackpropTol &&
                    std::abs(chance - 1.0 / 3.0) <= kChanceBand && kept == acc;
  return {pass, "max relative backprop error = " + num(worst) + ", epochs=0 accuracy " +
                    num(chance, "%.3f") + ", q=0 magnitude prune " + num(acc, "%.3f") +
                    " -> " + num(kept, "%.3f")};
}

Verdict comparison() {
  RunConfig c;
  c.out = scratch("compare");
  const CommandReport rep = cmd_compare(c);
  const std::string csv = read_text_file(c.out / "compare.csv");
  fs::remove_all(c.out);
  const bool rows = csv.find("\nriccinets,") != std::string::npos &&
                    csv.find("\nlowest_magnitude,") != std::string::npos &&
                    csv.find("\nbaseline,") != std::string::npos;
  const bool refs = csv.find("87.59") != std::string::npos &&
                    csv.find("84.77") != std::string::npos &&
                    csv.find("85.23") != std::string::npos;
  const auto at = csv.find("curvature-pruned accuracy >= magnitude-pruned accuracy:");
  const std::string outcome =
      at == std::string::npos ? "missing" : csv.substr(at, csv.find('\n', at) - at);
  return {rows && refs && at != std::string::npos,
          std::string("three rows ") + (rows ? "present" : "missing") + ", references " +
              (refs ? "present" : "missing") + "; " + outcome};
}

Verdict transfer() {
  RunConfig c;
  c.out = scratch("transfer");
  std::vector<TransferRow> rows;
  try {
    cmd_transfer(c);
    rows = run_transfer(c, nullptr);
  } catch (const std::exception& e) {
    fs::remove_all(c.out);
    return {false, std::string("crashed: ") + e.what()};
  }
  fs::remove_all(c.out);
  std::size_t shrunk = 0;
  std::string cells;
  for (const TransferRow& r : rows) {
    const bool ok = r.flops_ratio > 0.0 && r.flops_ratio < 1.0;
    shrunk += ok ? 1 : 0;
    cells += (cells.empty() ? "" : " ") + num(r.flops_ratio, "%.2f");
  }
  const bool shape = rows.size() == c.k_grid.size() + c.p_grid.size();
  return {shape && static_cast<double>(shrunk) >= kTransferShare * static_cast<double>(rows.size()),
          std::to_string(shrunk) + "/" + std::to_string(rows.size()) +
              " cells with FLOPs ratio < 1 (" + cells + "), no crashes"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"transport oracle equivalence", transport_oracle},
      {"mass normalization", mass_normalization},
      {"curvature sanity", curvature_sanity},
      {"flow behaviour", flow_behaviour},
      {"compression", compression},
      {"policy gradient", policy_gradient},
      {"end-to-end search", end_to_end_search},
      {"trainer", trainer},
      {"comparison harness", comparison},
      {"transfer harness", transfer},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first.c_str(),
                v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
