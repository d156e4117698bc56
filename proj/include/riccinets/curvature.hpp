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

#ifndef RICCINETS_CURVATURE_HPP
#define RICCINETS_CURVATURE_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "riccinets/graph.hpp"

namespace riccinets {

/// Coefficients of the node mass distribution. gamma is not stored: the
/// neighbour coefficients satisfy beta + gamma + delta = 1.
struct MassParams {
  double alpha = 0.5;
  double beta = 0.6;
  double delta = 0.2;

  double gamma() const { return 1.0 - beta - delta; }

  /// Throws Error(kParameter) unless alpha, beta, delta lie in [0,1] and
  /// beta + delta <= 1.
  void validate() const;

  friend bool operator==(const MassParams&, const MassParams&) = default;
};

struct MassPoint {
  NodeId node;
  double mass;
};

/// Probability measure attached to one node: the centre first, then its
/// neighbours in increasing id order.
struct MassDistribution {
  NodeId center = 0;
  std::vector<MassPoint> support;

  double total() const;
  double mass_of(NodeId x) const;
};

/// Degree statistics feeding the neighbour weights. For a Dag these are the
/// oriented in/out degrees; for an undirected graph in == out == degree.
struct DegreeStats {
  std::vector<double> degree;
  std::vector<double> in;
  std::vector<double> out;

  static DegreeStats of(const Graph& g);
};

/// Neighbour weight s(y) = beta/Deg(y) + gamma*In(y) + delta*Out(y)/max(In(y),1).
double neighbor_score(const DegreeStats& stats, NodeId y, const MassParams& p);

/// alpha stays on x; 1-alpha is split over the neighbours of x in proportion
/// to neighbor_score(). When every score is zero the split is uniform.
/// Throws Error(kDegenerateNode) for an isolated node with alpha < 1.
MassDistribution mass_distribution(const Graph& g, const DegreeStats& stats,
                                   NodeId x, const MassParams& p);
MassDistribution mass_distribution(const Dag& dag, NodeId x,
                                   const MassParams& p);

/// Shortest-path distances from a set of source nodes. Unreachable pairs
/// are +inf. Rows exist only for requested sources.
class DistanceTable {
 public:
  DistanceTable() = default;
  DistanceTable(std::size_t node_count, std::vector<NodeId> sources,
                std::vector<double> rows);

  std::size_t node_count() const { return node_count_; }
  bool has_source(NodeId s) const {
    return s < row_of_.size() && row_of_[s] >= 0;
  }
  /// Throws Error(kParameter) when `from` was not a source.
  double operator()(NodeId from, NodeId to) const;

 private:
  std::size_t node_count_ = 0;
  std::vector<long> row_of_;
  std::vector<double> rows_;
};

/// Dijkstra over the graph with edges traversed in both directions and the
/// supplied weights (or the graph's own when empty). Weights must be > 0.
DistanceTable shortest_paths(const Graph& g, std::span<const NodeId> sources,
                             std::span<const double> weights = {});
DistanceTable all_pairs_shortest_paths(const Graph& g,
                                       std::span<const double> weights = {});

/// Exact 1-Wasserstein distance between two measures under the table's
/// ground metric. Throws Error(kTransportInfeasible) when positive masses
/// are separated by an infinite distance.
double wasserstein(const DistanceTable& dist, const MassDistribution& mx,
                   const MassDistribution& my);

struct EdgeCurvature {
  double kappa = 0.0;
  double wasserstein = 0.0;
  double distance = 0.0;
};

/// kappa(x,y) = 1 - W(m_x, m_y) / d(x,y). Throws Error(kDegenerateDistance)
/// when d(x,y) is not positive.
EdgeCurvature ollivier_ricci(const Graph& g, const DegreeStats& stats,
                             const DistanceTable& dist, NodeId x, NodeId y,
                             const MassParams& p);

/// Curvature of every edge of the Dag under the given weights, measures
/// built from the Dag's degree statistics and undirected distances.
struct CurvatureMap {
  std::vector<EdgeCurvature> edges;  // indexed by EdgeId
  DistanceTable distances;
};

CurvatureMap compute_curvature(const Dag& dag, const MassParams& p,
                               std::span<const double> weights = {});

/// CSV "u,v,kappa,wasserstein,distance" with 9 significant digits.
std::string format_curvature_csv(const Graph& g, const CurvatureMap& map);
void write_curvature_csv(const Graph& g, const CurvatureMap& map,
                         const std::filesystem::path& path);

}  // namespace riccinets

#endif  // RICCINETS_CURVATURE_HPP
