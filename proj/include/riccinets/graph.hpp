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

#ifndef RICCINETS_GRAPH_HPP
#define RICCINETS_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace riccinets {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// An incident edge seen from one endpoint.
struct Incidence {
  NodeId node;  // the other endpoint
  EdgeId edge;
};

/// Weighted simple graph with contiguous node ids 0..node_count-1.
///
/// Edges are stored sorted by (u, v); undirected edges are canonical with
/// u < v. The value is immutable after construction apart from
/// with_weights(), which returns a copy.
class Graph {
 public:
  Graph() = default;

  /// Validates and canonicalizes. Throws Error(kParameter) on self-loops,
  /// duplicates, out-of-range ids or invalid weights.
  Graph(std::size_t node_count, bool directed, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool directed() const noexcept { return directed_; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  std::vector<double> weights() const;

  /// Both in- and out-neighbours, sorted by node id.
  std::span<const Incidence> neighbors(NodeId x) const {
    return neighbors_.at(x);
  }
  /// Directed adjacency; for undirected graphs out == in == neighbors.
  std::span<const Incidence> out_edges(NodeId x) const { return out_.at(x); }
  std::span<const Incidence> in_edges(NodeId x) const { return in_.at(x); }

  std::size_t degree(NodeId x) const { return neighbors_.at(x).size(); }
  std::size_t in_degree(NodeId x) const { return in_.at(x).size(); }
  std::size_t out_degree(NodeId x) const { return out_.at(x).size(); }

  /// Edge id for (u, v), or -1. Undirected lookups accept either order.
  std::int64_t find_edge(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v) >= 0; }

  Graph with_weights(std::span<const double> weights) const;

  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.node_count_ == b.node_count_ && a.directed_ == b.directed_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::size_t node_count_ = 0;
  bool directed_ = false;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> neighbors_;
  std::vector<std::vector<Incidence>> out_;
  std::vector<std::vector<Incidence>> in_;
};

struct WsParams {
  std::size_t n = 32;
  std::size_t k = 4;
  double p = 0.75;
  std::uint64_t seed = 0;
};

/// Watts-Strogatz small-world graph with unit weights.
///
/// Ring lattice of n nodes joined to k/2 neighbours on each side, followed by
/// k/2 clockwise sweeps; sweep j visits nodes 0..n-1 and rewires the edge
/// (v, v+j mod n) with probability p. Stream order: one uniform() per
/// rewiring decision, then below(n) per target attempt until the target is
/// neither v nor an existing neighbour of v. A node already adjacent to every
/// other node keeps its edge.
Graph ws_generate(const WsParams& params);

/// Subgraph induced by the largest connected component (ties: the component
/// holding the smallest node id), relabelled preserving order.
Graph largest_component(const Graph& g);

/// A directed acyclic graph with a single source (input) and single sink
/// (output), every other node lying on an input-to-output path.
class Dag {
 public:
  Dag() = default;
  /// Throws Error(kParameter) when the invariants do not hold.
  Dag(Graph graph, NodeId input, NodeId output);

  const Graph& graph() const noexcept { return graph_; }
  NodeId input() const noexcept { return input_; }
  NodeId output() const noexcept { return output_; }

  bool is_interior(NodeId x) const { return x != input_ && x != output_; }
  /// True when neither endpoint is the input or output node.
  bool is_interior_edge(EdgeId e) const;
  std::size_t interior_node_count() const { return graph_.node_count() - 2; }

  /// Nodes in topological order (Kahn's algorithm, ties by smallest id).
  std::vector<NodeId> topological_order() const;

  Dag with_weights(std::span<const double> weights) const {
    return Dag(graph_.with_weights(weights), input_, output_);
  }

  /// Recovers input/output as the unique in-degree-0 / out-degree-0 nodes.
  static Dag from_graph(Graph graph);

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  Graph graph_;
  NodeId input_ = 0;
  NodeId output_ = 0;
};

/// Orients every edge from lower to higher label and attaches a virtual
/// input node (id n) to every in-degree-0 node and a virtual output node
/// (id n+1) from every out-degree-0 node. Virtual edges have weight 1.
/// Throws Error(kDisconnected) for a disconnected graph.
Dag to_dag(const Graph& g);

/// Kahn-style acyclicity check; returns a topological order or empty.
std::vector<NodeId> topological_sort(const Graph& g);

/// Edge list: "nodes <n> directed <0|1>" then "<u> <v> <w>" per line.
/// Weights are written with 17 significant digits so reads are exact.
void write_graph(const Graph& g, const std::filesystem::path& path);
Graph read_graph(const std::filesystem::path& path);
std::string format_graph(const Graph& g);
Graph parse_graph(const std::string& text);

/// Graphviz export; edge labels carry the weight to 4 decimals.
void write_dot(const Graph& g, const std::filesystem::path& path);
std::string format_dot(const Graph& g);

}  // namespace riccinets

#endif  // RICCINETS_GRAPH_HPP
