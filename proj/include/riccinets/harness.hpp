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

#ifndef RICCINETS_HARNESS_HPP
#define RICCINETS_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riccinets/controller.hpp"
#include "riccinets/curvature.hpp"
#include "riccinets/evaluator.hpp"
#include "riccinets/flow.hpp"
#include "riccinets/graph.hpp"

namespace riccinets {

enum class EvaluatorKind { kTrain, kSurrogate };

/// Every knob of a run. Loaded from a flat JSON object; keys absent from the
/// file keep these defaults, unknown keys are a config error.
struct RunConfig {
  // graph
  std::size_t n = 32;
  std::size_t k = 4;
  double p = 0.75;
  // mass distribution used by the flow/prune/eval stages
  MassParams mass;
  // flow
  int max_iter = kDefaultMaxIter;
  double tol = kDefaultTolerance;
  // reward and controller
  double mu = 0.0;
  std::size_t episodes = 20;
  std::size_t steps = 5;
  std::size_t batch = 2;
  std::size_t bins = 11;
  std::size_t hidden = 32;
  double lr = 0.01;
  double discount = 0.9;
  // evaluator
  EvaluatorKind evaluator = EvaluatorKind::kTrain;
  std::size_t width = kDefaultWidth;
  std::size_t classes = kDefaultClasses;
  std::size_t input_dim = 16;
  std::size_t n_train = 600;
  std::size_t n_test = 200;
  std::size_t epochs = 40;
  std::size_t train_batch = 64;
  double train_lr = 0.05;
  // seeds
  std::uint64_t seed_graph = 0;
  std::uint64_t seed_policy = 0;
  std::uint64_t seed_data = 0;
  // experiments
  std::size_t seeds = 5;
  std::vector<double> q_grid = {0.3, 0.35, 0.4, 0.45, 0.5, 0.55,
                                0.6, 0.65, 0.7, 0.75, 0.8};
  double window_lo = 40.0;
  double window_hi = 50.0;
  std::vector<std::size_t> k_grid = {2, 4, 6, 8};
  std::vector<double> p_grid = {0.25, 0.5, 0.75, 1.0};
  std::vector<double> mu_grid = {0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
  std::string best_state;  // optional path to a best_state.json
  std::filesystem::path out = "out";

  /// Throws Error(kConfig) on out-of-range values.
  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string format_run_config(const RunConfig& config);

DatasetSpec dataset_spec(const RunConfig& config);
TrainConfig train_config(const RunConfig& config);

/// Seed of the network initialisation stream for a data seed.
std::uint64_t network_seed(std::uint64_t seed_data);

/// Messages a command wants shown to the user, plus the files it wrote.
struct CommandReport {
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
};

/// Watts-Strogatz graph per the config; when disconnected the largest
/// component is kept and a warning recorded.
Graph generate_graph(std::size_t n, std::size_t k, double p, std::uint64_t seed,
                     std::vector<std::string>* warnings);

/// Evaluates a pruned network with the configured evaluator. The dataset is
/// built lazily from seed_data and reused across calls.
class NetworkEvaluator {
 public:
  explicit NetworkEvaluator(const RunConfig& config);
  EvalReport operator()(const Dag& pruned);
  const Dataset& dataset();

 private:
  RunConfig config_;
  std::optional<Dataset> data_;
};

/// Flow, prune and evaluate one state on a fixed Dag. Empty networks and
/// non-finite training come back as failed outcomes with accuracy 0.
/// `pruned`, when given, receives the prune result of a successful state.
StepOutcome evaluate_state(const Dag& dag, const MassParams& mass,
                           const RunConfig& config, NetworkEvaluator& eval,
                           PruneResult* pruned = nullptr);

/// Single-stage commands reading and writing files under config.out.
CommandReport cmd_generate(const RunConfig& config);
CommandReport cmd_flow(const RunConfig& config);
CommandReport cmd_prune(const RunConfig& config);
CommandReport cmd_eval(const RunConfig& config);

/// Controller search: writes history.csv and best_state.json.
CommandReport cmd_search(const RunConfig& config, SearchResult* result = nullptr);

/// Search repeated for each mu in config.mu_grid; writes mu_sweep.csv.
CommandReport cmd_mu_sweep(const RunConfig& config);

struct CompareRow {
  std::string method;
  double accuracy = 0.0;  // percent
  double accuracy_std = 0.0;
  double flops_ratio = 1.0;
  double weights_remaining = 0.0;  // percent of the dense unit weights
  double weights_remaining_std = 0.0;
  double reward = 0.0;
  std::size_t samples = 0;
};

struct CompareTable {
  std::vector<CompareRow> rows;  // curvature-pruned, magnitude, dense
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool window_widened = false;
  std::size_t seeds = 0;
};

CompareTable run_compare(const RunConfig& config, CommandReport* report);
std::string format_compare_csv(const CompareTable& table);
/// Writes compare.csv.
CommandReport cmd_compare(const RunConfig& config);

struct TransferRow {
  std::string config;
  std::size_t k = 0;
  double p = 0.0;
  double accuracy = 0.0;
  double flops_ratio = 0.0;
  double weights_remaining = 0.0;  // percent of the unpruned unit weights
  double reward = 0.0;
  std::string note;
};

std::vector<TransferRow> run_transfer(const RunConfig& config,
                                      CommandReport* report);
std::string format_transfer_csv(std::span<const TransferRow> rows);
/// Writes transfer.csv.
CommandReport cmd_transfer(const RunConfig& config);

/// Mass parameters from config.best_state when set, else config.mass.
MassParams resolve_mass(const RunConfig& config);

/// {"alpha","beta","delta","reward"}.
std::string format_best_state(const MassParams& m, double reward);
MassParams parse_best_state(const std::string& json_text, double* reward);

/// Dispatches "generate", "flow", "prune", "eval", "search", "mu-sweep",
/// "compare" and "transfer". Throws Error(kConfig) for anything else.
CommandReport run_command(const std::string& command, const RunConfig& config);

}  // namespace riccinets

#endif  // RICCINETS_HARNESS_HPP
