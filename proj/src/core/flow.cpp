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

#include "riccinets/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "riccinets/error.hpp"

namespace riccinets {

FlowState FlowState::initial(const Dag& dag) {
  FlowState s;
  s.dag = dag;
  s.weights.assign(dag.graph().edge_count(), 1.0);
  s.target_sum = static_cast<double>(s.weights.size());
  return s;
}

void normalize_weights(std::vector<double>& w, double target, double floor) {
  if (w.empty()) return;
  if (target < floor * static_cast<double>(w.size())) {
    throw Error(ErrorCode::kDegenerateFlow,
                "weight budget cannot keep every edge above the floor");
  }
  std::vector<char> pinned(w.size(), 0);
  for (;;) {
    double free_sum = 0.0;
    std::size_t n_pinned = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (pinned[i]) {
        ++n_pinned;
      } else {
        free_sum += w[i];
      }
    }
    const double remaining = target - floor * static_cast<double>(n_pinned);
    if (!(free_sum > 0.0) || !(remaining > 0.0)) {
      throw Error(ErrorCode::kDegenerateFlow,
                  "all edge weights collapsed to the floor");
    }
    const double scale = remaining / free_sum;
    bool changed = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!pinned[i] && w[i] * scale < floor) {
        pinned[i] = 1;
        changed = true;
      }
    }
    if (changed) continue;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = pinned[i] ? floor : w[i] * scale;
    }
    return;
  }
}

FlowState flow_step(const FlowState& state, const MassParams& p) {
  const CurvatureMap curv = compute_curvature(state.dag, p, state.weights);
  std::vector<double> next(state.weights.size());
  for (std::size_t e = 0; e < next.size(); ++e) {
    const EdgeCurvature& c = curv.edges[e];
    next[e] = std::max(0.0, (1.0 - c.kappa) * c.distance);
    if (!std::isfinite(next[e])) {
      throw Error(ErrorCode::kNonFinite, "non-finite flow update");
    }
  }
  normalize_weights(next, state.target_sum);

  FlowState out;
  out.dag = state.dag;
  out.target_sum = state.target_sum;
  out.iteration = state.iteration + 1;
  out.trace = state.trace;
  double delta = 0.0, sum = 0.0;
  double lo = next.empty() ? 0.0 : next[0];
  double hi = lo;
  for (std::size_t e = 0; e < next.size(); ++e) {
    delta = std::max(delta, std::abs(next[e] - state.weights[e]));
    sum += next[e];
    lo = std::min(lo, next[e]);
    hi = std::max(hi, next[e]);
  }
  out.weights = std::move(next);
  out.max_delta = delta;
  out.trace.push_back({out.iteration, delta, sum, lo, hi});
  return out;
}

FlowState run_flow(const Dag& dag, const MassParams& p, int max_iter,
                   double tol) {
  if (max_iter < 0 || !(tol > 0.0)) {
    throw Error(ErrorCode::kParameter, "run_flow needs max_iter >= 0 and tol > 0");
  }
  p.validate();
  FlowState state = FlowState::initial(dag);
  while (state.iteration < max_iter) {
    state = flow_step(state, p);
    if (state.max_delta < tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

double flops_estimate(const Dag& dag, std::size_t width, std::size_t classes) {
  const double d = static_cast<double>(width);
  const Graph& g = dag.graph();
  double total = 0.0;
  for (NodeId x = 0; x < g.node_count(); ++x) {
    if (!dag.is_interior(x)) continue;
    total += 2.0 * static_cast<double>(g.in_degree(x)) * d + 2.0 * d * d;
  }
  return total + 2.0 * d * static_cast<double>(classes);
}

namespace {

std::vector<char> reach(const Graph& g, const std::vector<char>& edge_alive,
                        NodeId start, bool forward) {
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{start};
  seen[start] = 1;
  while (!stack.empty()) {
    const NodeId x = stack.back();
    stack.pop_back();
    const auto list = forward ? g.out_edges(x) : g.in_edges(x);
    for (const Incidence& inc : list) {
      if (!edge_alive[inc.edge] || seen[inc.node]) continue;
      seen[inc.node] = 1;
      stack.push_back(inc.node);
    }
  }
  return seen;
}

}  // namespace

PruneResult prune(const Dag& dag, std::span<const double> weights,
                  std::size_t width, std::size_t classes) {
  const Graph& g = dag.graph();
  if (weights.size() != g.edge_count()) {
    throw Error(ErrorCode::kParameter, "weight vector size mismatch");
  }
  PruneResult r;
  r.flops_before = flops_estimate(dag, width, classes);
  double sum = 0.0;
  for (double w : weights) sum += w;
  r.threshold = weights.empty() ? 0.0 : sum / static_cast<double>(weights.size());

  std::vector<char> edge_alive(g.edge_count(), 1);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (dag.is_interior_edge(e) && weights[e] > r.threshold) {
      edge_alive[e] = 0;
      ++r.edges_cut;
    }
  }

  std::vector<char> node_alive(g.node_count(), 1);
  for (;;) {
    const auto from_in = reach(g, edge_alive, dag.input(), true);
    const auto to_out = reach(g, edge_alive, dag.output(), false);
    if (!from_in[dag.output()]) {
      throw Error(ErrorCode::kEmptyNetwork,
                  "pruning disconnected the input from the output");
    }
    bool changed = false;
    for (NodeId x = 0; x < g.node_count(); ++x) {
      if (!node_alive[x] || !dag.is_interior(x)) continue;
      if (!from_in[x] || !to_out[x]) {
        node_alive[x] = 0;
        changed = true;
        for (const Incidence& inc : g.neighbors(x)) edge_alive[inc.edge] = 0;
      }
    }
    if (!changed) break;
  }

  r.node_map.assign(g.node_count(), -1);
  long next = 0;
  for (NodeId x = 0; x < g.node_count(); ++x) {
    if (node_alive[x]) r.node_map[x] = next++;
  }
  std::vector<Edge> kept;
  std::vector<double> kept_w;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (!edge_alive[e]) continue;
    const Edge& ed = g.edge(e);
    kept.push_back({static_cast<NodeId>(r.node_map[ed.u]),
                    static_cast<NodeId>(r.node_map[ed.v]), weights[e]});
  }
  r.pruned = Dag(Graph(static_cast<std::size_t>(next), true, std::move(kept)),
                 static_cast<NodeId>(r.node_map[dag.input()]),
                 static_cast<NodeId>(r.node_map[dag.output()]));
  r.nodes_removed = g.node_count() - static_cast<std::size_t>(next);
  r.edges_removed = g.edge_count() - r.pruned.graph().edge_count();
  r.flops_after = flops_estimate(r.pruned, width, classes);
  return r;
}

std::string format_flow_trace_csv(const FlowState& state) {
  std::string out = "k,max_delta,sum_w,min_w,max_w\n";
  char buf[200];
  for (const FlowTraceRow& row : state.trace) {
    std::snprintf(buf, sizeof buf, "%d,%.9g,%.17g,%.9g,%.9g\n", row.k,
                  row.max_delta, row.sum_w, row.min_w, row.max_w);
    out += buf;
  }
  return out;
}

std::string format_prune_report_csv(const PruneResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%zu,%zu,%.17g,%.17g\n", r.threshold,
                r.edges_removed, r.nodes_removed, r.flops_before,
                r.flops_after);
  return std::string("threshold,edges_removed,nodes_removed,flops_before,"
                     "flops_after\n") +
         buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace riccinets
