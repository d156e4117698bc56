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

#ifndef RICCINETS_FLOW_HPP
#define RICCINETS_FLOW_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "riccinets/curvature.hpp"
#include "riccinets/graph.hpp"

namespace riccinets {

inline constexpr double kWeightFloor = 1e-6;
inline constexpr int kDefaultMaxIter = 50;
inline constexpr double kDefaultTolerance = 1e-4;
inline constexpr std::size_t kDefaultWidth = 8;
inline constexpr std::size_t kDefaultClasses = 3;

struct FlowTraceRow {
  int k = 0;
  double max_delta = 0.0;
  double sum_w = 0.0;
  double min_w = 0.0;
  double max_w = 0.0;
};

/// Edge weights of one Ricci-flow run on a fixed Dag topology.
struct FlowState {
  Dag dag;
  std::vector<double> weights;  // indexed by EdgeId
  double target_sum = 0.0;      // sum of the initial weights
  int iteration = 0;
  double max_delta = 0.0;
  bool converged = false;
  std::vector<FlowTraceRow> trace;

  /// Unit weights on every edge of the Dag.
  static FlowState initial(const Dag& dag);
};

/// Rescales so the weights sum to `target`, pinning any weight that would
/// fall below `floor` at the floor and scaling the rest. Throws
/// Error(kDegenerateFlow) when no positive weight remains or the target
/// cannot be met above the floor.
void normalize_weights(std::vector<double>& w, double target,
                       double floor = kWeightFloor);

/// One discrete flow iteration: w_ij <- (1 - kappa_ij) * d(i,j) under the
/// current weights, then normalization and flooring. Throws
/// Error(kDegenerateFlow) when every raw update collapses to zero.
FlowState flow_step(const FlowState& state, const MassParams& p);

/// Iterates flow_step from unit weights until the largest weight change is
/// below `tol` or `max_iter` iterations have run.
FlowState run_flow(const Dag& dag, const MassParams& p,
                   int max_iter = kDefaultMaxIter,
                   double tol = kDefaultTolerance);

/// Cost model: each interior node pays 2*in_deg*width for aggregation and
/// 2*width^2 for its unit transform; the classifier adds 2*width*classes.
double flops_estimate(const Dag& dag, std::size_t width = kDefaultWidth,
                      std::size_t classes = kDefaultClasses);

struct PruneResult {
  Dag pruned;
  double threshold = 0.0;
  std::size_t edges_cut = 0;      // interior edges above the threshold
  std::size_t edges_removed = 0;  // total edge count reduction
  std::size_t nodes_removed = 0;
  double flops_before = 0.0;
  double flops_after = 0.0;
  std::vector<long> node_map;  // old id -> new id, -1 when removed

  double flops_ratio() const {
    return flops_before > 0.0 ? flops_after / flops_before : 0.0;
  }
};

/// Removes interior edges whose weight is strictly above the mean of all
/// weights, then deletes interior nodes off every input-to-output path.
/// Survivors are relabelled preserving order. Throws Error(kEmptyNetwork)
/// when the output is no longer reachable from the input.
PruneResult prune(const Dag& dag, std::span<const double> weights,
                  std::size_t width = kDefaultWidth,
                  std::size_t classes = kDefaultClasses);
inline PruneResult prune(const FlowState& final_state,
                         std::size_t width = kDefaultWidth,
                         std::size_t classes = kDefaultClasses) {
  return prune(final_state.dag, final_state.weights, width, classes);
}

std::string format_flow_trace_csv(const FlowState& state);
std::string format_prune_report_csv(const PruneResult& r);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace riccinets

#endif  // RICCINETS_FLOW_HPP
