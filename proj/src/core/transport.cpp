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

#include "riccinets/transport.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "riccinets/error.hpp"

namespace riccinets {
namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-12;

/// Dense simplex tableau. Row 0 is the objective (reduced costs, with the
/// negated objective value in the last column); rows 1..m are constraints.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  std::size_t& basic(std::size_t row) { return basis_[row - 1]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= f * at(pr, c);
      at(r, pc) = 0.0;
    }
    basic(pr) = pc;
  }

  /// Bland's rule: lowest-index improving column, lowest-index leaving
  /// variable among ratio ties. Columns >= allowed_cols never enter.
  void optimize(std::size_t allowed_cols) {
    for (std::size_t guard = 0;; ++guard) {
      if (guard > 100000) {
        throw Error(ErrorCode::kInternal, "transport simplex did not terminate");
      }
      std::size_t enter = allowed_cols;
      for (std::size_t c = 0; c < allowed_cols; ++c) {
        if (at(0, c) < -kCostEps) {
          enter = c;
          break;
        }
      }
      if (enter == allowed_cols) return;

      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 1; r <= rows_; ++r) {
        const double a = at(r, enter);
        if (a > kPivotEps) best = std::min(best, rhs(r) / a);
      }
      std::size_t leave = 0;
      for (std::size_t r = 1; r <= rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps || rhs(r) / a > best + 1e-14) continue;
        if (leave == 0 || basic(r) < basic(leave)) leave = r;
      }
      if (leave == 0) {
        // Transportation polytopes are bounded; an unbounded ray means the
        // input was malformed.
        throw Error(ErrorCode::kInternal, "transport simplex unbounded");
      }
      pivot(leave, enter);
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
};

}  // namespace

TransportPlan solve_transport(std::span<const double> supply,
                              std::span<const double> demand,
                              std::span<const double> cost) {
  const std::size_t ns = supply.size();
  const std::size_t nd = demand.size();
  if (cost.size() != ns * nd) {
    throw Error(ErrorCode::kParameter, "cost matrix shape mismatch");
  }
  double total_s = 0.0, total_d = 0.0;
  for (double s : supply) {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw Error(ErrorCode::kParameter, "supplies must be finite and >= 0");
    total_s += s;
  }
  for (double d : demand) {
    if (!(d >= 0.0) || !std::isfinite(d))
      throw Error(ErrorCode::kParameter, "demands must be finite and >= 0");
    total_d += d;
  }
  if (std::abs(total_s - total_d) > 1e-9 * std::max(1.0, total_s)) {
    throw Error(ErrorCode::kParameter, "unbalanced transportation problem");
  }

  TransportPlan plan;
  plan.flow.assign(ns * nd, 0.0);

  // Zero-mass rows and columns carry no flow; dropping them keeps the
  // tableau small.
  std::vector<std::size_t> rows_used, cols_used;
  for (std::size_t i = 0; i < ns; ++i)
    if (supply[i] > 0.0) rows_used.push_back(i);
  for (std::size_t j = 0; j < nd; ++j)
    if (demand[j] > 0.0) cols_used.push_back(j);
  if (rows_used.empty() || cols_used.empty()) return plan;

  for (std::size_t i : rows_used) {
    for (std::size_t j : cols_used) {
      if (!std::isfinite(cost[i * nd + j])) {
        throw Error(ErrorCode::kTransportInfeasible,
                    "infinite ground distance between support points");
      }
    }
  }

  const std::size_t rs = rows_used.size();
  const std::size_t cs = cols_used.size();
  // The last column constraint is implied by the others.
  const std::size_t m = rs + cs - 1;
  const std::size_t nx = rs * cs;
  Tableau t(m, nx + m);

  for (std::size_t a = 0; a < rs; ++a) {
    for (std::size_t b = 0; b < cs; ++b) t.at(1 + a, a * cs + b) = 1.0;
    t.rhs(1 + a) = supply[rows_used[a]];
  }
  for (std::size_t b = 0; b + 1 < cs; ++b) {
    for (std::size_t a = 0; a < rs; ++a) t.at(1 + rs + b, a * cs + b) = 1.0;
    t.rhs(1 + rs + b) = demand[cols_used[b]];
  }
  for (std::size_t r = 1; r <= m; ++r) {
    t.at(r, nx + r - 1) = 1.0;
    t.basic(r) = nx + r - 1;
  }

  // Phase I: minimize the sum of artificials.
  for (std::size_t c = 0; c <= nx + m; ++c) {
    double s = 0.0;
    for (std::size_t r = 1; r <= m; ++r) s += t.at(r, c);
    t.at(0, c) = c >= nx && c < nx + m ? 0.0 : -s;
  }
  t.optimize(nx + m);
  if (-t.rhs(0) > 1e-9) {
    throw Error(ErrorCode::kInternal, "transport phase I found no feasible plan");
  }
  // Drive zero-level artificials out of the basis; rows where that is
  // impossible are redundant and stay inert because artificials never
  // re-enter.
  for (std::size_t r = 1; r <= m; ++r) {
    if (t.basic(r) < nx) continue;
    for (std::size_t c = 0; c < nx; ++c) {
      if (std::abs(t.at(r, c)) > 1e-9) {
        t.pivot(r, c);
        break;
      }
    }
  }

  // Phase II objective in terms of the current basis.
  for (std::size_t c = 0; c <= nx + m; ++c) t.at(0, c) = 0.0;
  for (std::size_t a = 0; a < rs; ++a) {
    for (std::size_t b = 0; b < cs; ++b) {
      t.at(0, a * cs + b) = cost[rows_used[a] * nd + cols_used[b]];
    }
  }
  for (std::size_t r = 1; r <= m; ++r) {
    const std::size_t c = t.basic(r);
    const double f = t.at(0, c);
    if (f == 0.0) continue;
    for (std::size_t k = 0; k <= nx + m; ++k) t.at(0, k) -= f * t.at(r, k);
  }
  t.optimize(nx);

  for (std::size_t r = 1; r <= m; ++r) {
    const std::size_t c = t.basic(r);
    if (c >= nx) continue;
    const std::size_t a = c / cs;
    const std::size_t b = c % cs;
    plan.flow[rows_used[a] * nd + cols_used[b]] = std::max(0.0, t.rhs(r));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < ns * nd; ++k) {
    if (plan.flow[k] > 0.0) total += plan.flow[k] * cost[k];
  }
  plan.cost = total;
  return plan;
}

}  // namespace riccinets
