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

#include "riccinets/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>

#include "riccinets/error.hpp"
#include "riccinets/transport.hpp"

namespace riccinets {

void MassParams::validate() const {
  auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in_unit(alpha) || !in_unit(beta) || !in_unit(delta)) {
    throw Error(ErrorCode::kParameter, "mass parameters must lie in [0,1]");
  }
  if (beta + delta > 1.0 + 1e-12) {
    throw Error(ErrorCode::kParameter, "beta + delta must not exceed 1");
  }
}

double MassDistribution::total() const {
  double s = 0.0;
  for (const MassPoint& p : support) s += p.mass;
  return s;
}

double MassDistribution::mass_of(NodeId x) const {
  for (const MassPoint& p : support)
    if (p.node == x) return p.mass;
  return 0.0;
}

DegreeStats DegreeStats::of(const Graph& g) {
  DegreeStats s;
  const std::size_t n = g.node_count();
  s.degree.resize(n);
  s.in.resize(n);
  s.out.resize(n);
  for (NodeId x = 0; x < n; ++x) {
    s.degree[x] = static_cast<double>(g.degree(x));
    s.in[x] = static_cast<double>(g.directed() ? g.in_degree(x) : g.degree(x));
    s.out[x] = static_cast<double>(g.directed() ? g.out_degree(x) : g.degree(x));
  }
  return s;
}

double neighbor_score(const DegreeStats& stats, NodeId y, const MassParams& p) {
  const double deg = stats.degree.at(y);
  const double in = stats.in.at(y);
  const double out = stats.out.at(y);
  const double inv_deg = deg > 0.0 ? 1.0 / deg : 0.0;
  // gamma can dip a hair below zero from rounding in 1 - beta - delta.
  const double gamma = std::max(0.0, p.gamma());
  return p.beta * inv_deg + gamma * in + p.delta * (out / std::max(in, 1.0));
}

MassDistribution mass_distribution(const Graph& g, const DegreeStats& stats,
                                   NodeId x, const MassParams& p) {
  if (x >= g.node_count()) {
    throw Error(ErrorCode::kParameter, "node " + std::to_string(x) + " out of range");
  }
  p.validate();
  MassDistribution m;
  m.center = x;
  const auto nbrs = g.neighbors(x);
  if (nbrs.empty()) {
    if (p.alpha < 1.0) {
      throw Error(ErrorCode::kDegenerateNode,
                  "node " + std::to_string(x) +
                      " has no neighbours to receive mass (alpha < 1)");
    }
    m.support.push_back({x, 1.0});
    return m;
  }

  std::vector<double> score(nbrs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    score[i] = neighbor_score(stats, nbrs[i].node, p);
    total += score[i];
  }
  if (!(total > 0.0)) {
    std::fill(score.begin(), score.end(), 1.0);
    total = static_cast<double>(score.size());
  }

  const double spread = 1.0 - p.alpha;
  m.support.reserve(nbrs.size() + 1);
  m.support.push_back({x, p.alpha});
  for (std::size_t i = 0; i < nbrs.size(); ++i) {
    m.support.push_back({nbrs[i].node, spread * score[i] / total});
  }
  return m;
}

MassDistribution mass_distribution(const Dag& dag, NodeId x,
                                   const MassParams& p) {
  return mass_distribution(dag.graph(), DegreeStats::of(dag.graph()), x, p);
}

DistanceTable::DistanceTable(std::size_t node_count, std::vector<NodeId> sources,
                             std::vector<double> rows)
    : node_count_(node_count), row_of_(node_count, -1), rows_(std::move(rows)) {
  if (rows_.size() != sources.size() * node_count) {
    throw Error(ErrorCode::kInternal, "distance table shape mismatch");
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    row_of_.at(sources[i]) = static_cast<long>(i);
  }
}

double DistanceTable::operator()(NodeId from, NodeId to) const {
  if (!has_source(from) || to >= node_count_) {
    throw Error(ErrorCode::kParameter,
                "no distance row for node " + std::to_string(from));
  }
  return rows_[static_cast<std::size_t>(row_of_[from]) * node_count_ + to];
}

DistanceTable shortest_paths(const Graph& g, std::span<const NodeId> sources,
                             std::span<const double> weights) {
  const std::size_t n = g.node_count();
  std::vector<double> w =
      weights.empty() ? g.weights()
                      : std::vector<double>(weights.begin(), weights.end());
  if (w.size() != g.edge_count()) {
    throw Error(ErrorCode::kParameter, "weight vector size mismatch");
  }
  for (double x : w) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorCode::kParameter,
                  "shortest paths need finite positive weights");
    }
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> rows(sources.size() * n, kInf);
  using Item = std::pair<double, NodeId>;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    const NodeId s = sources[si];
    if (s >= n) throw Error(ErrorCode::kParameter, "source out of range");
    double* d = rows.data() + si * n;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[s] = 0.0;
    pq.push({0.0, s});
    while (!pq.empty()) {
      const auto [dx, x] = pq.top();
      pq.pop();
      if (dx > d[x]) continue;
      for (const Incidence& inc : g.neighbors(x)) {
        const double nd = dx + w[inc.edge];
        if (nd < d[inc.node]) {
          d[inc.node] = nd;
          pq.push({nd, inc.node});
        }
      }
    }
  }
  return DistanceTable(n, std::vector<NodeId>(sources.begin(), sources.end()),
                       std::move(rows));
}

DistanceTable all_pairs_shortest_paths(const Graph& g,
                                       std::span<const double> weights) {
  std::vector<NodeId> all(g.node_count());
  for (NodeId x = 0; x < all.size(); ++x) all[x] = x;
  return shortest_paths(g, all, weights);
}

double wasserstein(const DistanceTable& dist, const MassDistribution& mx,
                   const MassDistribution& my) {
  std::vector<double> supply, demand, cost;
  supply.reserve(mx.support.size());
  demand.reserve(my.support.size());
  for (const MassPoint& a : mx.support) supply.push_back(a.mass);
  for (const MassPoint& b : my.support) demand.push_back(b.mass);
  cost.reserve(supply.size() * demand.size());
  for (const MassPoint& a : mx.support) {
    for (const MassPoint& b : my.support) {
      const double d = dist(a.node, b.node);
      if (!std::isfinite(d) && a.mass > 0.0 && b.mass > 0.0) {
        throw Error(ErrorCode::kTransportInfeasible,
                    "nodes " + std::to_string(a.node) + " and " +
                        std::to_string(b.node) + " are disconnected");
      }
      // Pairs with a zero-mass endpoint never carry flow.
      cost.push_back(std::isfinite(d) ? d : 0.0);
    }
  }
  return solve_transport(supply, demand, cost).cost;
}

EdgeCurvature ollivier_ricci(const Graph& g, const DegreeStats& stats,
                             const DistanceTable& dist, NodeId x, NodeId y,
                             const MassParams& p) {
  EdgeCurvature out;
  out.distance = dist(x, y);
  if (!(out.distance > 0.0) || !std::isfinite(out.distance)) {
    throw Error(ErrorCode::kDegenerateDistance,
                "curvature needs 0 < d(x,y) < inf for edge " +
                    std::to_string(x) + "-" + std::to_string(y));
  }
  const MassDistribution mx = mass_distribution(g, stats, x, p);
  const MassDistribution my = mass_distribution(g, stats, y, p);
  out.wasserstein = wasserstein(dist, mx, my);
  out.kappa = 1.0 - out.wasserstein / out.distance;
  return out;
}

CurvatureMap compute_curvature(const Dag& dag, const MassParams& p,
                               std::span<const double> weights) {
  p.validate();
  const Graph& g = dag.graph();
  const DegreeStats stats = DegreeStats::of(g);
  CurvatureMap map;
  // The whole table is built before any transport problem is solved.
  map.distances = all_pairs_shortest_paths(g, weights);
  map.edges.resize(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    map.edges[e] = ollivier_ricci(g, stats, map.distances, ed.u, ed.v, p);
  }
  return map;
}

std::string format_curvature_csv(const Graph& g, const CurvatureMap& map) {
  std::string out = "u,v,kappa,wasserstein,distance\n";
  char buf[160];
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const EdgeCurvature& c = map.edges.at(e);
    std::snprintf(buf, sizeof buf, "%u,%u,%.9g,%.9g,%.9g\n", ed.u, ed.v,
                  c.kappa, c.wasserstein, c.distance);
    out += buf;
  }
  return out;
}

void write_curvature_csv(const Graph& g, const CurvatureMap& map,
                         const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_curvature_csv(g, map);
}

}  // namespace riccinets
