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

#include "riccinets/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "riccinets/error.hpp"
#include "riccinets/rng.hpp"

namespace riccinets {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kParameter: return "parameter error";
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kDisconnected: return "disconnected graph";
    case ErrorCode::kDegenerateNode: return "degenerate node";
    case ErrorCode::kTransportInfeasible: return "transport infeasible";
    case ErrorCode::kDegenerateDistance: return "degenerate distance";
    case ErrorCode::kDegenerateFlow: return "degenerate flow";
    case ErrorCode::kEmptyNetwork: return "empty network";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kStageOrder: return "stage order error";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kInternal: return "internal error";
  }
  return "unknown error";
}

Graph::Graph(std::size_t node_count, bool directed, std::vector<Edge> edges)
    : node_count_(node_count), directed_(directed), edges_(std::move(edges)) {
  for (const Edge& e : edges_) {
    if (e.u >= node_count_ || e.v >= node_count_) {
      throw Error(ErrorCode::kParameter,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") references a node outside 0.." +
                      std::to_string(node_count_ == 0 ? 0 : node_count_ - 1));
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::kParameter,
                  "self-loop on node " + std::to_string(e.u));
    }
    if (!std::isfinite(e.w) || e.w < 0.0) {
      throw Error(ErrorCode::kParameter, "edge weight must be finite and >= 0");
    }
  }
  if (!directed_) {
    for (Edge& e : edges_) {
      if (e.u > e.v) std::swap(e.u, e.v);
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    const Edge& a = edges_[i - 1];
    const Edge& b = edges_[i];
    if (a.u == b.u && a.v == b.v) {
      throw Error(ErrorCode::kParameter,
                  "duplicate edge (" + std::to_string(a.u) + "," +
                      std::to_string(a.v) + ")");
    }
  }
  if (directed_) {
    // Antiparallel pairs would collapse into one undirected neighbour.
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Edge& e : edges_) seen.emplace(e.u, e.v);
    for (const Edge& e : edges_) {
      if (seen.count({e.v, e.u})) {
        throw Error(ErrorCode::kParameter, "antiparallel edges between " +
                                               std::to_string(e.u) + " and " +
                                               std::to_string(e.v));
      }
    }
  }

  neighbors_.assign(node_count_, {});
  out_.assign(node_count_, {});
  in_.assign(node_count_, {});
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    neighbors_[e.u].push_back({e.v, id});
    neighbors_[e.v].push_back({e.u, id});
    out_[e.u].push_back({e.v, id});
    in_[e.v].push_back({e.u, id});
    if (!directed_) {
      out_[e.v].push_back({e.u, id});
      in_[e.u].push_back({e.v, id});
    }
  }
  auto by_node = [](const Incidence& a, const Incidence& b) {
    return a.node < b.node;
  };
  for (std::size_t x = 0; x < node_count_; ++x) {
    std::sort(neighbors_[x].begin(), neighbors_[x].end(), by_node);
    std::sort(out_[x].begin(), out_[x].end(), by_node);
    std::sort(in_[x].begin(), in_[x].end(), by_node);
  }
}

std::vector<double> Graph::weights() const {
  std::vector<double> w;
  w.reserve(edges_.size());
  for (const Edge& e : edges_) w.push_back(e.w);
  return w;
}

std::int64_t Graph::find_edge(NodeId u, NodeId v) const {
  if (u >= node_count_ || v >= node_count_) return -1;
  const auto& list = directed_ ? out_[u] : neighbors_[u];
  auto it = std::lower_bound(
      list.begin(), list.end(), v,
      [](const Incidence& inc, NodeId target) { return inc.node < target; });
  if (it == list.end() || it->node != v) return -1;
  return it->edge;
}

Graph Graph::with_weights(std::span<const double> weights) const {
  if (weights.size() != edges_.size()) {
    throw Error(ErrorCode::kParameter, "weight vector size mismatch");
  }
  Graph out = *this;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw Error(ErrorCode::kParameter, "edge weight must be finite and >= 0");
    }
    out.edges_[i].w = weights[i];
  }
  return out;
}

namespace {

std::vector<int> component_labels(const Graph& g, int* count) {
  std::vector<int> label(g.node_count(), -1);
  int next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<NodeId> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const NodeId x = stack.back();
      stack.pop_back();
      for (const Incidence& inc : g.neighbors(x)) {
        if (label[inc.node] < 0) {
          label[inc.node] = next;
          stack.push_back(inc.node);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

}  // namespace

bool Graph::is_connected() const {
  if (node_count_ == 0) return true;
  int count = 0;
  component_labels(*this, &count);
  return count == 1;
}

Graph ws_generate(const WsParams& params) {
  const std::size_t n = params.n;
  const std::size_t k = params.k;
  if (n == 0 || k == 0 || k % 2 != 0 || k >= n) {
    throw Error(ErrorCode::kParameter,
                "Watts-Strogatz requires even k with 0 < k < n (got n=" +
                    std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  if (!(params.p >= 0.0 && params.p <= 1.0)) {
    throw Error(ErrorCode::kParameter, "rewiring probability must lie in [0,1]");
  }

  // Adjacency sets keep the duplicate test O(log k) during rewiring.
  std::vector<std::set<NodeId>> adj(n);
  auto add = [&](NodeId a, NodeId b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  const std::size_t half = k / 2;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t j = 1; j <= half; ++j) {
      add(static_cast<NodeId>(v), static_cast<NodeId>((v + j) % n));
    }
  }

  Rng rng(params.seed);
  for (std::size_t j = 1; j <= half; ++j) {
    for (std::size_t vi = 0; vi < n; ++vi) {
      const auto v = static_cast<NodeId>(vi);
      const auto target = static_cast<NodeId>((vi + j) % n);
      if (rng.uniform() >= params.p) continue;
      if (!adj[v].count(target)) continue;
      if (adj[v].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(rng.below(n));
      } while (w == v || adj[v].count(w));
      adj[v].erase(target);
      adj[target].erase(v);
      add(v, w);
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n * half);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b : adj[a]) {
      if (a < b) edges.push_back({a, b, 1.0});
    }
  }
  return Graph(n, false, std::move(edges));
}

Graph largest_component(const Graph& g) {
  int count = 0;
  const std::vector<int> label = component_labels(g, &count);
  if (count <= 1) return g;
  std::vector<std::size_t> size(count, 0);
  for (int l : label) ++size[l];
  const int best = static_cast<int>(
      std::max_element(size.begin(), size.end()) - size.begin());
  std::vector<NodeId> remap(g.node_count(), 0);
  NodeId next = 0;
  for (NodeId x = 0; x < g.node_count(); ++x) {
    if (label[x] == best) remap[x] = next++;
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (label[e.u] == best) edges.push_back({remap[e.u], remap[e.v], e.w});
  }
  return Graph(next, g.directed(), std::move(edges));
}

std::vector<NodeId> topological_sort(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> indeg(n);
  for (NodeId x = 0; x < n; ++x) indeg[x] = g.in_degree(x);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId x = 0; x < n; ++x) {
    if (indeg[x] == 0) ready.push(x);
  }
  std::vector<NodeId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const NodeId x = ready.top();
    ready.pop();
    order.push_back(x);
    for (const Incidence& inc : g.out_edges(x)) {
      if (--indeg[inc.node] == 0) ready.push(inc.node);
    }
  }
  if (order.size() != n) order.clear();
  return order;
}

Dag::Dag(Graph graph, NodeId input, NodeId output)
    : graph_(std::move(graph)), input_(input), output_(output) {
  const std::size_t n = graph_.node_count();
  if (!graph_.directed()) {
    throw Error(ErrorCode::kParameter, "a Dag needs a directed graph");
  }
  if (input_ >= n || output_ >= n || input_ == output_) {
    throw Error(ErrorCode::kParameter, "invalid input/output node ids");
  }
  if (topological_sort(graph_).empty()) {
    throw Error(ErrorCode::kParameter, "graph contains a cycle");
  }
  for (NodeId x = 0; x < n; ++x) {
    if (x == input_) {
      if (graph_.in_degree(x) != 0)
        throw Error(ErrorCode::kParameter, "input node has incoming edges");
      continue;
    }
    if (x == output_) {
      if (graph_.out_degree(x) != 0)
        throw Error(ErrorCode::kParameter, "output node has outgoing edges");
      continue;
    }
    if (graph_.in_degree(x) == 0 || graph_.out_degree(x) == 0) {
      throw Error(ErrorCode::kParameter,
                  "node " + std::to_string(x) +
                      " is a second source or sink");
    }
  }
  // Unique source and sink in an acyclic graph imply every node lies on an
  // input-to-output path.
  for (EdgeId e = 0; e < graph_.edge_count(); ++e) {
    const Edge& ed = graph_.edge(e);
    if (is_interior_edge(e) && ed.u > ed.v) {
      throw Error(ErrorCode::kParameter,
                  "interior edge " + std::to_string(ed.u) + "->" +
                      std::to_string(ed.v) + " violates label order");
    }
  }
}

bool Dag::is_interior_edge(EdgeId e) const {
  const Edge& ed = graph_.edge(e);
  return is_interior(ed.u) && is_interior(ed.v);
}

std::vector<NodeId> Dag::topological_order() const {
  return topological_sort(graph_);
}

Dag Dag::from_graph(Graph graph) {
  if (!graph.directed()) {
    throw Error(ErrorCode::kParameter, "a Dag file must be directed");
  }
  std::vector<NodeId> sources, sinks;
  for (NodeId x = 0; x < graph.node_count(); ++x) {
    if (graph.in_degree(x) == 0) sources.push_back(x);
    if (graph.out_degree(x) == 0) sinks.push_back(x);
  }
  if (sources.size() != 1 || sinks.size() != 1) {
    throw Error(ErrorCode::kParameter,
                "expected exactly one source and one sink, found " +
                    std::to_string(sources.size()) + " and " +
                    std::to_string(sinks.size()));
  }
  return Dag(std::move(graph), sources[0], sinks[0]);
}

Dag to_dag(const Graph& g) {
  if (g.directed()) {
    throw Error(ErrorCode::kParameter, "to_dag expects an undirected graph");
  }
  if (g.node_count() == 0 || !g.is_connected()) {
    throw Error(ErrorCode::kDisconnected,
                "to_dag requires a connected graph");
  }
  const auto n = static_cast<NodeId>(g.node_count());
  const NodeId input = n;
  const NodeId output = n + 1;
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::vector<std::size_t> indeg(n, 0), outdeg(n, 0);
  for (const Edge& e : g.edges()) {
    ++outdeg[e.u];  // canonical u < v is already label order
    ++indeg[e.v];
  }
  for (NodeId x = 0; x < n; ++x) {
    if (indeg[x] == 0) edges.push_back({input, x, 1.0});
    if (outdeg[x] == 0) edges.push_back({x, output, 1.0});
  }
  return Dag(Graph(n + 2, true, std::move(edges)), input, output);
}

std::string format_graph(const Graph& g) {
  std::string out = "nodes " + std::to_string(g.node_count()) + " directed " +
                    (g.directed() ? "1" : "0") + "\n";
  char buf[96];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%u %u %.17g\n", e.u, e.v, e.w);
    out += buf;
  }
  return out;
}

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(lineno) + ": " + msg);
  };

  long long n = -1;
  int directed = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream hs(line);
    std::string kw1, kw2, extra;
    if (!(hs >> kw1 >> n >> kw2 >> directed) || kw1 != "nodes" ||
        kw2 != "directed" || (hs >> extra)) {
      fail("expected header 'nodes <n> directed <0|1>'");
    }
    if (n < 1) fail("node count must be positive");
    if (directed != 0 && directed != 1) fail("directed flag must be 0 or 1");
    break;
  }
  if (n < 0) throw Error(ErrorCode::kParse, "missing header line");

  std::vector<Edge> edges;
  std::set<std::pair<NodeId, NodeId>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long u, v;
    std::string wtext, extra;
    if (!(ls >> u >> v >> wtext) || (ls >> extra)) {
      fail("expected '<u> <v> <w>'");
    }
    char* end = nullptr;
    const double w = std::strtod(wtext.c_str(), &end);
    if (end == wtext.c_str() || *end != '\0') fail("bad weight '" + wtext + "'");
    if (u < 0 || v < 0 || u >= n || v >= n) {
      fail("dangling node id (graph has " + std::to_string(n) + " nodes)");
    }
    if (u == v) fail("self-loop on node " + std::to_string(u));
    if (!std::isfinite(w) || w < 0.0) fail("negative or non-finite weight");
    auto key = std::make_pair(static_cast<NodeId>(u), static_cast<NodeId>(v));
    if (!directed && key.first > key.second) std::swap(key.first, key.second);
    if (!seen.insert(key).second) fail("duplicate edge");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), w});
  }
  try {
    return Graph(static_cast<std::size_t>(n), directed == 1, std::move(edges));
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
}

void write_graph(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_graph(g);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_graph(ss.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_dot(const Graph& g) {
  const char* arrow = g.directed() ? " -> " : " -- ";
  std::string out = g.directed() ? "digraph G {\n" : "graph G {\n";
  char buf[96];
  for (NodeId x = 0; x < g.node_count(); ++x) {
    std::snprintf(buf, sizeof buf, "  %u [label=\"%u\"];\n", x, x);
    out += buf;
  }
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "  %u%s%u [label=\"%.4f\"];\n", e.u, arrow,
                  e.v, e.w);
    out += buf;
  }
  out += "}\n";
  return out;
}

void write_dot(const Graph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_dot(g);
}

}  // namespace riccinets
