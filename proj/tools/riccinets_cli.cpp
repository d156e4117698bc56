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

// riccinets command-line driver. Thin wrapper over rn_run_command: loads the
// JSON config, applies flag overrides and maps failures to exit codes
// (2 = config error, 3 = pipeline error).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "riccinets.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPipeline = 3;

int config_failure(const std::string& msg) {
  std::cerr << "riccinets: config error: " << msg << "\n";
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ricci-flow pruning of randomly wired networks"};
  app.set_version_flag("--version", rn_version());

  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed_graph, seed_policy, seed_data;
  std::optional<double> mu;
  std::optional<std::string> out_dir, evaluator;

  app.add_option("command", command, "Pipeline stage or experiment")
      ->required()
      ->check(CLI::IsMember({"generate", "flow", "prune", "eval", "search",
                             "mu-sweep", "compare", "transfer"}));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed-graph", seed_graph, "Graph generator seed");
  app.add_option("--seed-policy", seed_policy, "Controller seed");
  app.add_option("--seed-data", seed_data, "Dataset and network seed");
  app.add_option("--mu", mu, "FLOPs penalty in the reward");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--evaluator", evaluator, "train or surrogate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) return config_failure("cannot read " + config_path);
    std::stringstream text;
    text << in.rdbuf();
    try {
      config = nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::exception& e) {
      return config_failure(config_path + ": " + e.what());
    }
    if (!config.is_object()) return config_failure(config_path + ": expected a JSON object");
  }
  if (seed_graph) config["seed_graph"] = *seed_graph;
  if (seed_policy) config["seed_policy"] = *seed_policy;
  if (seed_data) config["seed_data"] = *seed_data;
  if (mu) config["mu"] = *mu;
  if (out_dir) config["out"] = *out_dir;
  if (evaluator) config["evaluator"] = *evaluator;

  char* report = nullptr;
  const rn_status status =
      rn_run_command(command.c_str(), config.dump().c_str(), &report);
  nlohmann::json r = nlohmann::json::object();
  if (report) {
    r = nlohmann::json::parse(report, nullptr, false);
    rn_string_free(report);
  }
  if (status != RN_OK) {
    std::cerr << "riccinets " << command << ": " << rn_status_string(status)
              << ": " << rn_last_error() << "\n";
    return status == RN_ERR_CONFIG ? kExitConfig : kExitPipeline;
  }
  if (r.contains("warnings")) {
    for (const auto& w : r["warnings"]) {
      std::cerr << "warning: " << w.get<std::string>() << "\n";
    }
  }
  if (r.contains("files")) {
    for (const auto& f : r["files"]) std::cout << "wrote " << f.get<std::string>() << "\n";
  }
  return 0;
}
