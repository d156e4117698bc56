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

#ifndef RICCINETS_TRANSPORT_HPP
#define RICCINETS_TRANSPORT_HPP

#include <span>
#include <vector>

namespace riccinets {

/// Exact solution of a balanced transportation problem.
struct TransportPlan {
  double cost = 0.0;
  std::vector<double> flow;  // row-major supply x demand
};

/// Minimizes sum cost[i][j] * T[i][j] subject to row sums = supply,
/// column sums = demand, T >= 0. cost is row-major supply.size() x
/// demand.size() and must be finite. Supplies and demands must be
/// nonnegative with equal totals (to 1e-9 relative).
///
/// Dense two-phase simplex with Bland's rule: terminates on every input and
/// returns an optimal vertex. Meant for the tiny supports of neighbourhood
/// measures, not for large instances.
TransportPlan solve_transport(std::span<const double> supply,
                              std::span<const double> demand,
                              std::span<const double> cost);

}  // namespace riccinets

#endif  // RICCINETS_TRANSPORT_HPP
