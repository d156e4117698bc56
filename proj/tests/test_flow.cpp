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

#include <cmath>
#include <fstream>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "riccinets/error.hpp"
#include "riccinets/flow.hpp"

using namespace riccinets;

namespace {

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::vector<double> read_weights(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    w.push_back(std::stod(line));
  }
  return w;
}

// input 3 -> 0, 0 -> 1, 0 -> 2, 1 -> 2, 2 -> output 4
Dag triangle_dag() {
  return to_dag(Graph(3, false, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
}

// input 0 -> {1, 2} -> output 3, all degrees 2.
Dag diamond() {
  return Dag(Graph(4, true, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}), 0, 3);
}

Dag seeded_dag() { return to_dag(ws_generate({32, 4, 0.75, 7})); }

}  // namespace

TEST_CASE("normalize_weights conserves the sum and respects the floor") {
  std::vector<double> w = {0.0, 1.0, 1.0};
  normalize_weights(w, 2.0);
  CHECK(w[0] == kWeightFloor);
  CHECK(w[1] == doctest::Approx(1.0 - kWeightFloor / 2).epsilon(1e-15));
  CHECK(sum(w) == doctest::Approx(2.0).epsilon(1e-15));

  std::vector<double> scale = {1.0, 2.0, 5.0};
  normalize_weights(scale, 4.0);
  CHECK(scale[0] == doctest::Approx(0.5));
  CHECK(scale[2] == doctest::Approx(2.5));

  std::vector<double> zeros = {0.0, 0.0};
  CHECK_THROWS_AS(normalize_weights(zeros, 2.0), Error);
  std::vector<double> tight = {1.0, 1.0};
  CHECK_THROWS_AS(normalize_weights(tight, 1e-7), Error);
}

TEST_CASE("flow_step applies (1 - kappa) * d then normalizes") {
  const Dag dag = seeded_dag();
  FlowState s = FlowState::initial(dag);
  for (int step = 0; step < 3; ++step) {
    const auto curv = compute_curvature(dag, {}, s.weights);
    std::vector<double> raw;
    for (const EdgeCurvature& e : curv.edges) {
      raw.push_back(std::max(0.0, (1.0 - e.kappa) * e.distance));
    }
    // Independent rescale: no weight sits near the floor here.
    const double scale = s.target_sum / sum(raw);
    const FlowState next = flow_step(s, {});
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(next.weights[i] == doctest::Approx(raw[i] * scale).epsilon(1e-12));
    }
    CHECK(next.iteration == s.iteration + 1);
    s = next;
  }
}

TEST_CASE("flow_step update arithmetic") {
  // Dirac measures: kappa = 0 so the raw update is d itself.
  const Dag dag = triangle_dag();
  const FlowState s = FlowState::initial(dag);
  const auto curv = compute_curvature(dag, {1.0, 0.5, 0.2});
  for (const EdgeCurvature& e : curv.edges) CHECK(e.kappa == 0.0);
  const FlowState next = flow_step(s, {1.0, 0.5, 0.2});
  CHECK(next.weights == s.weights);
  CHECK(next.max_delta == 0.0);
  // kappa = -0.5 at d = 1 maps to 1.5.
  CHECK((1.0 - (-0.5)) * 1.0 == 1.5);
}

TEST_CASE("single-edge Dag converges after one iteration") {
  const Dag edge(Graph(2, true, {{0, 1, 1.0}}), 0, 1);
  const FlowState s = run_flow(edge, {0.3, 0.6, 0.2});
  CHECK(s.converged);
  CHECK(s.iteration == 1);
  CHECK(s.weights[0] == 1.0);

  // With alpha = 0.5 both endpoint measures coincide: kappa = 1 and the
  // only raw weight collapses to zero.
  try {
    run_flow(edge, {0.5, 0.6, 0.2});
    FAIL("expected a degenerate flow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDegenerateFlow);
  }
}

TEST_CASE("symmetric cycle keeps equal weights") {
  const Dag d = diamond();
  FlowState s = FlowState::initial(d);
  for (int k = 0; k < 5; ++k) {
    s = flow_step(s, {0.3, 1.0, 0.0});
    for (double w : s.weights) CHECK(w == doctest::Approx(s.weights[0]).epsilon(1e-14));
  }
  CHECK(run_flow(d, {0.3, 1.0, 0.0}).converged);
}

TEST_CASE("seeded WS flow converges to the frozen weights") {
  const Dag dag = seeded_dag();
  const FlowState s = run_flow(dag, {});
  CHECK(s.converged);
  CHECK(s.iteration < kDefaultMaxIter);
  CHECK(s.max_delta < kDefaultTolerance);

  // Iteration 1 by hand from the unit-weight curvature dump: every edge has
  // d = 1, so w1 = (1 - kappa) * |E| / sum(1 - kappa).
  const auto curv = compute_curvature(dag, {});
  double total = 0.0;
  for (const EdgeCurvature& e : curv.edges) {
    CHECK(e.distance == 1.0);
    total += 1.0 - e.kappa;
  }
  REQUIRE(s.trace.size() == static_cast<std::size_t>(s.iteration));
  const FlowState one = flow_step(FlowState::initial(dag), {});
  for (std::size_t i = 0; i < curv.edges.size(); ++i) {
    const double expected = (1.0 - curv.edges[i].kappa) * dag.graph().edge_count() / total;
    CHECK(one.weights[i] == doctest::Approx(expected).epsilon(1e-12));
  }

  const auto golden = read_weights(RICCINETS_TEST_DATA "/flow_ws7_default.weights");
  REQUIRE(golden.size() == s.weights.size());
  for (std::size_t i = 0; i < golden.size(); ++i) {
    CHECK(s.weights[i] == doctest::Approx(golden[i]).epsilon(1e-12));
  }
}

TEST_CASE("flow conserves the weight sum and the floor every iteration") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Graph g = ws_generate({32, 4, 0.75, seed});
    if (!g.is_connected()) continue;
    const Dag dag = to_dag(g);
    const FlowState s = run_flow(dag, {0.2, 0.3, 0.5});
    const double target = static_cast<double>(dag.graph().edge_count());
    CHECK(s.target_sum == target);
    for (const FlowTraceRow& row : s.trace) {
      CHECK(std::abs(row.sum_w - target) <= 1e-9);
      CHECK(row.min_w >= kWeightFloor);
      CHECK(std::isfinite(row.max_w));
    }
  }
}

TEST_CASE("max_iter bounds an unconverged run") {
  const FlowState s = run_flow(seeded_dag(), {}, 2);
  CHECK(s.iteration == 2);
  CHECK_FALSE(s.converged);
  CHECK(s.trace.size() == 2);
}

TEST_CASE("flops model") {
  SUBCASE("chain of three interior nodes") {
    const Dag chain = to_dag(Graph(3, false, {{0, 1, 1}, {1, 2, 1}}));
    CHECK(flops_estimate(chain, 4, 3) == 3 * (2 * 1 * 4 + 2 * 16) + 2 * 4 * 3);
  }
  SUBCASE("in-degree two") {
    // input 3 -> {0, 1}, 0 -> 2, 1 -> 2, 2 -> output 4
    const Dag d(Graph(5, true, {{3, 0, 1}, {3, 1, 1}, {0, 2, 1}, {1, 2, 1}, {2, 4, 1}}), 3, 4);
    const double without_classifier = flops_estimate(d, 4, 3) - 2 * 4 * 3;
    CHECK(without_classifier == 40 + 40 + 48);
  }
  SUBCASE("adding an interior edge costs exactly 2d") {
    const Dag dag = seeded_dag();
    const Graph& g = dag.graph();
    for (NodeId u = 0; u < 32; ++u) {
      for (NodeId v = u + 1; v < 32; ++v) {
        if (g.has_edge(u, v)) continue;
        std::vector<Edge> edges(g.edges().begin(), g.edges().end());
        edges.push_back({u, v, 1.0});
        const Dag bigger(Graph(g.node_count(), true, edges), dag.input(), dag.output());
        CHECK(flops_estimate(bigger, 8, 3) - flops_estimate(dag, 8, 3) == 16.0);
        break;
      }
    }
  }
}

TEST_CASE("prune at the mean") {
  SUBCASE("equal weights remove nothing") {
    const Dag d = triangle_dag();
    const std::vector<double> w(d.graph().edge_count(), 0.7);
    const PruneResult r = prune(d, w);
    CHECK(r.threshold == doctest::Approx(0.7));
    CHECK(r.edges_removed == 0);
    CHECK(r.nodes_removed == 0);
    CHECK(r.pruned == d.with_weights(w));
  }
  SUBCASE("weights 1, 2, 3 remove only the heaviest edge") {
    const Dag d = triangle_dag();
    std::vector<double> w(d.graph().edge_count(), 2.0);
    w[d.graph().find_edge(0, 1)] = 1.0;
    w[d.graph().find_edge(1, 2)] = 2.0;
    w[d.graph().find_edge(0, 2)] = 3.0;
    const PruneResult r = prune(d, w);
    CHECK(r.threshold == doctest::Approx(2.0));
    CHECK(r.edges_cut == 1);
    CHECK(r.edges_removed == 1);
    CHECK(r.nodes_removed == 0);
    CHECK_FALSE(r.pruned.graph().has_edge(0, 2));
    CHECK(r.pruned.graph().has_edge(0, 1));
  }
  SUBCASE("virtual edges are never cut") {
    const Dag d = triangle_dag();
    std::vector<double> w(d.graph().edge_count(), 1.0);
    w[d.graph().find_edge(d.input(), 0)] = 10.0;
    const PruneResult r = prune(d, w);
    CHECK(r.edges_removed == 0);
  }
  SUBCASE("cutting the only path empties the network") {
    const Dag chain = to_dag(Graph(2, false, {{0, 1, 1}}));
    std::vector<double> w(chain.graph().edge_count(), 1.0);
    w[chain.graph().find_edge(0, 1)] = 5.0;
    try {
      prune(chain, w);
      FAIL("expected an empty network");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyNetwork);
    }
  }
}

TEST_CASE("prune of the seeded flow matches a reachability oracle") {
  const Dag dag = seeded_dag();
  const auto w = read_weights(RICCINETS_TEST_DATA "/flow_ws7_default.weights");
  const Graph& g = dag.graph();

  // Oracle: mean threshold, cut interior edges above it, then keep nodes both
  // reachable from the input and reaching the output.
  double mean = 0.0;
  for (double x : w) mean += x;
  mean /= static_cast<double>(w.size());
  std::vector<oracle::RawEdge> kept;
  std::size_t cut = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const bool interior = dag.is_interior(ed.u) && dag.is_interior(ed.v);
    if (interior && w[e] > mean) {
      ++cut;
      continue;
    }
    kept.push_back({ed.u, ed.v, w[e]});
  }
  const auto fwd = oracle::reach(g.node_count(), kept, dag.input(), true);
  const auto bwd = oracle::reach(g.node_count(), kept, dag.output(), false);
  std::size_t dead = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) dead += !(fwd[v] && bwd[v]);
  std::size_t live_edges = 0;
  for (const auto& e : kept) live_edges += fwd[e.u] && bwd[e.u] && fwd[e.v] && bwd[e.v];

  const PruneResult r = prune(dag, w);
  CHECK(r.threshold == doctest::Approx(mean).epsilon(1e-15));
  CHECK(r.edges_cut == cut);
  CHECK(r.nodes_removed == dead);
  CHECK(r.edges_removed == g.edge_count() - live_edges);
  CHECK(r.pruned.graph().edge_count() == live_edges);
  // Frozen from the audited run above.
  CHECK(r.edges_cut == 32);
  CHECK(r.edges_removed == 57);
  CHECK(r.nodes_removed == 23);
  CHECK(r.flops_before == 5232.0);
  CHECK(r.flops_after == 1392.0);
  CHECK(r.flops_after == flops_estimate(r.pruned));
  CHECK(r.flops_before == flops_estimate(dag));

  // Survivors keep their relative order.
  long last = -1;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (r.node_map[v] < 0) continue;
    CHECK(r.node_map[v] == last + 1);
    last = r.node_map[v];
  }
}

TEST_CASE("pruning is deterministic and keeps the Dag invariants") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Graph g = ws_generate({32, 4, 0.75, seed});
    if (!g.is_connected()) continue;
    const Dag dag = to_dag(g);
    const FlowState s = run_flow(dag, {});
    PruneResult a, b;
    try {
      a = prune(s);
      b = prune(s);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyNetwork);
      continue;
    }
    CHECK(a.pruned == b.pruned);
    CHECK(a.node_map == b.node_map);
    CHECK(a.flops_after <= a.flops_before);
    const Graph& pg = a.pruned.graph();
    CHECK(topological_sort(pg).size() == pg.node_count());
    std::vector<oracle::RawEdge> edges;
    for (const Edge& e : pg.edges()) edges.push_back({e.u, e.v, e.w});
    const auto fwd = oracle::reach(pg.node_count(), edges, a.pruned.input(), true);
    const auto bwd = oracle::reach(pg.node_count(), edges, a.pruned.output(), false);
    for (NodeId v = 0; v < pg.node_count(); ++v) CHECK((fwd[v] && bwd[v]));
  }
}

TEST_CASE("trace and report CSV") {
  const FlowState s = run_flow(seeded_dag(), {});
  const std::string trace = format_flow_trace_csv(s);
  CHECK(trace.rfind("k,max_delta,sum_w,min_w,max_w\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : trace) lines += ch == '\n';
  CHECK(lines == s.trace.size() + 1);

  const std::string report = format_prune_report_csv(prune(s));
  CHECK(report.rfind("threshold,edges_removed,nodes_removed,flops_before,flops_after\n", 0) == 0);
  CHECK(report.find(",57,23,5232,1392") != std::string::npos);
}
