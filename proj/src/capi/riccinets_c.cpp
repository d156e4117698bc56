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

#include "riccinets.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"

#include "riccinets/curvature.hpp"
#include "riccinets/error.hpp"
#include "riccinets/evaluator.hpp"
#include "riccinets/flow.hpp"
#include "riccinets/graph.hpp"
#include "riccinets/harness.hpp"

struct rn_graph {
  riccinets::Graph g;
};
struct rn_dag {
  riccinets::Dag d;
};
struct rn_flow {
  riccinets::FlowState s;
};
struct rn_prune_result {
  riccinets::PruneResult r;
};

namespace {

using riccinets::Error;
using riccinets::ErrorCode;

static_assert(static_cast<int>(ErrorCode::kInternal) == RN_ERR_INTERNAL);
static_assert(static_cast<int>(ErrorCode::kConfig) == RN_ERR_CONFIG);

thread_local std::string g_last_error;

rn_status fail(rn_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

template <typename F>
rn_status guarded(F&& f) {
  try {
    f();
    return RN_OK;
  } catch (const Error& e) {
    return fail(static_cast<rn_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RN_ERR_INTERNAL, "unknown error");
  }
}

rn_status null_arg(const char* name) {
  return fail(RN_ERR_PARAMETER, std::string(name) + " is NULL");
}

riccinets::MassParams to_mass(const rn_mass_params* p) {
  if (!p) return {};
  return riccinets::MassParams{p->alpha, p->beta, p->delta};
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* rn_version(void) { return "0.1.0"; }

const char* rn_status_string(rn_status status) {
  if (status == RN_OK) return "ok";
  if (status < RN_ERR_PARAMETER || status > RN_ERR_INTERNAL) return "unknown";
  return riccinets::error_code_name(static_cast<ErrorCode>(status));
}

const char* rn_last_error(void) { return g_last_error.c_str(); }

rn_mass_params rn_mass_params_default(void) {
  const riccinets::MassParams m;
  return rn_mass_params{m.alpha, m.beta, m.delta};
}

rn_status rn_ws_generate(size_t n, size_t k, double p, uint64_t seed,
                         rn_graph** out) {
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new rn_graph{riccinets::ws_generate(riccinets::WsParams{n, k, p, seed})};
  });
}

rn_status rn_graph_read(const char* path, rn_graph** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_graph{riccinets::read_graph(path)}; });
}

rn_status rn_graph_write(const rn_graph* g, const char* path) {
  if (!g) return null_arg("graph");
  if (!path) return null_arg("path");
  return guarded([&] { riccinets::write_graph(g->g, path); });
}

rn_status rn_graph_write_dot(const rn_graph* g, const char* path) {
  if (!g) return null_arg("graph");
  if (!path) return null_arg("path");
  return guarded([&] { riccinets::write_dot(g->g, path); });
}

size_t rn_graph_node_count(const rn_graph* g) { return g ? g->g.node_count() : 0; }
size_t rn_graph_edge_count(const rn_graph* g) { return g ? g->g.edge_count() : 0; }
int rn_graph_is_directed(const rn_graph* g) { return g && g->g.directed() ? 1 : 0; }
int rn_graph_is_connected(const rn_graph* g) { return g && g->g.is_connected() ? 1 : 0; }

rn_status rn_graph_edge(const rn_graph* g, size_t index, uint32_t* u,
                        uint32_t* v, double* w) {
  if (!g) return null_arg("graph");
  if (index >= g->g.edge_count()) {
    return fail(RN_ERR_PARAMETER, "edge index out of range");
  }
  const riccinets::Edge& e = g->g.edge(static_cast<riccinets::EdgeId>(index));
  if (u) *u = e.u;
  if (v) *v = e.v;
  if (w) *w = e.w;
  return RN_OK;
}

rn_status rn_graph_largest_component(const rn_graph* g, rn_graph** out) {
  if (!g) return null_arg("graph");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_graph{riccinets::largest_component(g->g)}; });
}

void rn_graph_free(rn_graph* g) { delete g; }

rn_status rn_to_dag(const rn_graph* g, rn_dag** out) {
  if (!g) return null_arg("graph");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_dag{riccinets::to_dag(g->g)}; });
}

rn_status rn_dag_from_graph(const rn_graph* g, rn_dag** out) {
  if (!g) return null_arg("graph");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_dag{riccinets::Dag::from_graph(g->g)}; });
}

rn_status rn_dag_graph(const rn_dag* dag, rn_graph** out) {
  if (!dag) return null_arg("dag");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_graph{dag->d.graph()}; });
}

uint32_t rn_dag_input(const rn_dag* dag) { return dag ? dag->d.input() : 0; }
uint32_t rn_dag_output(const rn_dag* dag) { return dag ? dag->d.output() : 0; }

size_t rn_dag_interior_node_count(const rn_dag* dag) {
  return dag ? dag->d.interior_node_count() : 0;
}

double rn_flops_estimate(const rn_dag* dag, size_t width, size_t classes) {
  return dag ? riccinets::flops_estimate(dag->d, width, classes) : 0.0;
}

void rn_dag_free(rn_dag* dag) { delete dag; }

rn_status rn_curvature(const rn_dag* dag, const rn_mass_params* params,
                       double* kappa, size_t len) {
  if (!dag) return null_arg("dag");
  if (!kappa) return null_arg("kappa");
  if (len != dag->d.graph().edge_count()) {
    return fail(RN_ERR_PARAMETER, "kappa length must equal the edge count");
  }
  return guarded([&] {
    const auto map = riccinets::compute_curvature(dag->d, to_mass(params));
    for (size_t i = 0; i < len; ++i) kappa[i] = map.edges[i].kappa;
  });
}

rn_status rn_run_flow(const rn_dag* dag, const rn_mass_params* params,
                      int max_iter, double tol, rn_flow** out) {
  if (!dag) return null_arg("dag");
  if (!out) return null_arg("out");
  return guarded([&] {
    *out = new rn_flow{riccinets::run_flow(
        dag->d, to_mass(params),
        max_iter > 0 ? max_iter : riccinets::kDefaultMaxIter,
        tol > 0.0 ? tol : riccinets::kDefaultTolerance)};
  });
}

int rn_flow_iterations(const rn_flow* flow) { return flow ? flow->s.iteration : 0; }
int rn_flow_converged(const rn_flow* flow) { return flow && flow->s.converged ? 1 : 0; }
double rn_flow_max_delta(const rn_flow* flow) { return flow ? flow->s.max_delta : 0.0; }

rn_status rn_flow_weights(const rn_flow* flow, double* weights, size_t len) {
  if (!flow) return null_arg("flow");
  if (!weights) return null_arg("weights");
  if (len != flow->s.weights.size()) {
    return fail(RN_ERR_PARAMETER, "weights length must equal the edge count");
  }
  std::memcpy(weights, flow->s.weights.data(), len * sizeof(double));
  return RN_OK;
}

rn_status rn_flow_write_trace(const rn_flow* flow, const char* path) {
  if (!flow) return null_arg("flow");
  if (!path) return null_arg("path");
  return guarded([&] {
    riccinets::write_text_file(path, riccinets::format_flow_trace_csv(flow->s));
  });
}

void rn_flow_free(rn_flow* flow) { delete flow; }

rn_status rn_prune(const rn_flow* flow, size_t width, size_t classes,
                   rn_prune_result** out) {
  if (!flow) return null_arg("flow");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_prune_result{riccinets::prune(flow->s, width, classes)}; });
}

double rn_prune_threshold(const rn_prune_result* pr) { return pr ? pr->r.threshold : 0.0; }
size_t rn_prune_edges_removed(const rn_prune_result* pr) { return pr ? pr->r.edges_removed : 0; }
size_t rn_prune_nodes_removed(const rn_prune_result* pr) { return pr ? pr->r.nodes_removed : 0; }
double rn_prune_flops_before(const rn_prune_result* pr) { return pr ? pr->r.flops_before : 0.0; }
double rn_prune_flops_after(const rn_prune_result* pr) { return pr ? pr->r.flops_after : 0.0; }

rn_status rn_prune_dag(const rn_prune_result* pr, rn_dag** out) {
  if (!pr) return null_arg("prune result");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new rn_dag{pr->r.pruned}; });
}

rn_status rn_prune_write_report(const rn_prune_result* pr, const char* path) {
  if (!pr) return null_arg("prune result");
  if (!path) return null_arg("path");
  return guarded([&] {
    riccinets::write_text_file(path, riccinets::format_prune_report_csv(pr->r));
  });
}

void rn_prune_free(rn_prune_result* pr) { delete pr; }

rn_status rn_surrogate_eval(const rn_dag* dag, size_t width, size_t classes,
                            double* accuracy) {
  if (!dag) return null_arg("dag");
  if (!accuracy) return null_arg("accuracy");
  return guarded([&] {
    *accuracy = riccinets::surrogate_eval(dag->d, width, classes).accuracy;
  });
}

rn_status rn_compute_reward(double accuracy, double flops, double flops_baseline,
                            double mu, double* reward) {
  if (!reward) return null_arg("reward");
  return guarded([&] {
    *reward = riccinets::compute_reward(accuracy, flops, flops_baseline, mu).value;
  });
}

rn_status rn_run_command(const char* command, const char* config_json,
                         char** report_json) {
  if (report_json) *report_json = nullptr;
  if (!command) return null_arg("command");
  nlohmann::json report;
  const rn_status status = guarded([&] {
    const riccinets::RunConfig config =
        riccinets::parse_run_config(config_json ? config_json : "{}");
    const riccinets::CommandReport r = riccinets::run_command(command, config);
    report["warnings"] = r.warnings;
    nlohmann::json files = nlohmann::json::array();
    for (const auto& f : r.files) files.push_back(f.string());
    report["files"] = files;
  });
  if (status != RN_OK) {
    report = nlohmann::json::object();
    report["error"] = g_last_error;
    report["status"] = rn_status_string(status);
  }
  if (report_json) *report_json = dup_string(report.dump());
  return status;
}

void rn_string_free(char* s) { std::free(s); }

}  // extern "C"
