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


// Exercises the shared library through the C header only.

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "riccinets.h"

namespace fs = std::filesystem;

namespace {

std::vector<double> golden_weights() {
  std::ifstream in(fs::path(RICCINETS_TEST_DATA) / "flow_ws7_default.weights");
  std::vector<double> w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    w.push_back(std::stod(line));
  }
  return w;
}

}  // namespace

TEST_CASE("status strings and defaults") {
  CHECK(std::string(rn_version()) == "0.1.0");
  CHECK(std::string(rn_status_string(RN_OK)) == "ok");
  CHECK(std::strlen(rn_status_string(RN_ERR_EMPTY_NETWORK)) > 0);
  const rn_mass_params m = rn_mass_params_default();
  CHECK(m.alpha == 0.5);
  CHECK(m.beta == 0.6);
  CHECK(m.delta == 0.2);
}

TEST_CASE("generate, orient, flow and prune") {
  rn_graph* g = nullptr;
  REQUIRE(rn_ws_generate(32, 4, 0.75, 7, &g) == RN_OK);
  CHECK(rn_graph_node_count(g) == 32);
  CHECK(rn_graph_edge_count(g) == 64);
  CHECK(rn_graph_is_directed(g) == 0);
  CHECK(rn_graph_is_connected(g) == 1);

  rn_graph* golden = nullptr;
  const std::string gpath = (fs::path(RICCINETS_TEST_DATA) / "ws_32_4_075_seed7.edges").string();
  REQUIRE(rn_graph_read(gpath.c_str(), &golden) == RN_OK);
  REQUIRE(rn_graph_edge_count(golden) == 64);
  for (size_t e = 0; e < 64; ++e) {
    uint32_t u1, v1, u2, v2;
    double w1, w2;
    REQUIRE(rn_graph_edge(g, e, &u1, &v1, &w1) == RN_OK);
    REQUIRE(rn_graph_edge(golden, e, &u2, &v2, &w2) == RN_OK);
    CHECK(u1 == u2);
    CHECK(v1 == v2);
  }
  CHECK(rn_graph_edge(g, 64, nullptr, nullptr, nullptr) == RN_ERR_PARAMETER);
  rn_graph_free(golden);

  rn_dag* dag = nullptr;
  REQUIRE(rn_to_dag(g, &dag) == RN_OK);
  CHECK(rn_dag_input(dag) == 32);
  CHECK(rn_dag_output(dag) == 33);
  CHECK(rn_dag_interior_node_count(dag) == 32);
  CHECK(rn_flops_estimate(dag, 8, 3) == 5232.0);

  const rn_mass_params m = rn_mass_params_default();
  rn_graph* dg = nullptr;
  REQUIRE(rn_dag_graph(dag, &dg) == RN_OK);
  const size_t edges = rn_graph_edge_count(dg);
  std::vector<double> kappa(edges);
  REQUIRE(rn_curvature(dag, &m, kappa.data(), kappa.size()) == RN_OK);
  for (double k : kappa) CHECK(k <= 1.0 + 1e-12);
  CHECK(rn_curvature(dag, &m, kappa.data(), edges - 1) == RN_ERR_PARAMETER);

  rn_flow* flow = nullptr;
  REQUIRE(rn_run_flow(dag, &m, 0, 0.0, &flow) == RN_OK);
  CHECK(rn_flow_converged(flow) == 1);
  CHECK(rn_flow_iterations(flow) == 24);
  CHECK(rn_flow_max_delta(flow) < 1e-4);
  std::vector<double> w(edges);
  REQUIRE(rn_flow_weights(flow, w.data(), w.size()) == RN_OK);
  const auto expected = golden_weights();
  REQUIRE(expected.size() == edges);
  for (size_t i = 0; i < edges; ++i) CHECK(w[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  rn_prune_result* pr = nullptr;
  REQUIRE(rn_prune(flow, 8, 3, &pr) == RN_OK);
  CHECK(rn_prune_edges_removed(pr) == 57);
  CHECK(rn_prune_nodes_removed(pr) == 23);
  CHECK(rn_prune_flops_before(pr) == 5232.0);
  CHECK(rn_prune_flops_after(pr) == 1392.0);
  rn_dag* pruned = nullptr;
  REQUIRE(rn_prune_dag(pr, &pruned) == RN_OK);
  CHECK(rn_dag_interior_node_count(pruned) == 9);
  double acc = -1.0;
  REQUIRE(rn_surrogate_eval(pruned, 8, 3, &acc) == RN_OK);
  CHECK(acc >= 0.0);
  CHECK(acc < 1.0);

  const fs::path dir = fs::temp_directory_path() / "riccinets_capi";
  fs::create_directories(dir);
  CHECK(rn_graph_write(dg, (dir / "dag.edges").string().c_str()) == RN_OK);
  CHECK(rn_graph_write_dot(dg, (dir / "dag.dot").string().c_str()) == RN_OK);
  CHECK(rn_flow_write_trace(flow, (dir / "trace.csv").string().c_str()) == RN_OK);
  CHECK(rn_prune_write_report(pr, (dir / "report.csv").string().c_str()) == RN_OK);
  rn_graph* back = nullptr;
  REQUIRE(rn_graph_read((dir / "dag.edges").string().c_str(), &back) == RN_OK);
  rn_dag* back_dag = nullptr;
  REQUIRE(rn_dag_from_graph(back, &back_dag) == RN_OK);
  CHECK(rn_dag_input(back_dag) == 32);
  rn_dag_free(back_dag);
  rn_graph_free(back);
  fs::remove_all(dir);

  rn_dag_free(pruned);
  rn_prune_free(pr);
  rn_flow_free(flow);
  rn_graph_free(dg);
  rn_dag_free(dag);
  rn_graph_free(g);
}

TEST_CASE("errors carry codes and messages") {
  rn_graph* g = nullptr;
  CHECK(rn_ws_generate(10, 3, 0.5, 0, &g) == RN_ERR_PARAMETER);
  CHECK(g == nullptr);
  CHECK(std::strlen(rn_last_error()) > 0);
  CHECK(rn_ws_generate(10, 4, 0.5, 0, nullptr) == RN_ERR_PARAMETER);
  CHECK(std::string(rn_last_error()).find("NULL") != std::string::npos);
  CHECK(rn_graph_read("/nonexistent/graph.edges", &g) == RN_ERR_IO);


  double r = 0.0;
  CHECK(rn_compute_reward(0.9, 1.0, 1.0, 0.7, &r) == RN_OK);
  CHECK(r == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(rn_compute_reward(0.9, 1.0, 0.0, 0.7, &r) == RN_ERR_PARAMETER);

  rn_dag* dag = nullptr;
  rn_graph* single = nullptr;
  REQUIRE(rn_ws_generate(4, 2, 0.0, 0, &single) == RN_OK);
  REQUIRE(rn_to_dag(single, &dag) == RN_OK);
  const rn_mass_params bad{1.5, 0.5, 0.1};
  rn_flow* flow = nullptr;
  CHECK(rn_run_flow(dag, &bad, 0, 0.0, &flow) == RN_ERR_PARAMETER);
  rn_dag_free(dag);
  rn_graph_free(single);

  rn_graph_free(nullptr);
  rn_dag_free(nullptr);
  rn_flow_free(nullptr);
  rn_prune_free(nullptr);
  rn_string_free(nullptr);
}

TEST_CASE("harness commands through the C API") {
  const fs::path dir = fs::temp_directory_path() / "riccinets_capi_cmd";
  fs::remove_all(dir);
  nlohmann::json cfg = {{"evaluator", "surrogate"}, {"out", dir.string()}, {"seed_graph", 7}};
  const std::string text = cfg.dump();

  char* report = nullptr;
  CHECK(rn_run_command("flow", text.c_str(), &report) == RN_ERR_STAGE_ORDER);
  REQUIRE(report != nullptr);
  auto j = nlohmann::json::parse(report);
  CHECK(j["status"].get<std::string>() == rn_status_string(RN_ERR_STAGE_ORDER));
  CHECK(j["error"].get<std::string>().find("generate") != std::string::npos);
  rn_string_free(report);

  for (const char* cmd : {"generate", "flow", "prune", "eval"}) {
    report = nullptr;
    REQUIRE(rn_run_command(cmd, text.c_str(), &report) == RN_OK);
    j = nlohmann::json::parse(report);
    CHECK(j["files"].size() >= 1);
    rn_string_free(report);
  }
  CHECK(fs::exists(dir / "reward.json"));

  report = nullptr;
  CHECK(rn_run_command("nope", text.c_str(), &report) == RN_ERR_CONFIG);
  rn_string_free(report);
  report = nullptr;
  CHECK(rn_run_command("generate", "{\"wat\": 1}", &report) == RN_ERR_CONFIG);
  rn_string_free(report);
  CHECK(rn_run_command("generate", text.c_str(), nullptr) == RN_OK);
  fs::remove_all(dir);
}
