/* Copyright 2026 The riccinets Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to riccinets.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function (which accepts NULL). Every fallible call returns
 * an rn_status; on failure rn_last_error() describes the problem for the
 * calling thread until its next failing call. Output pointers are written
 * only on success.
 */

#ifndef RICCINETS_H
#define RICCINETS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RICCINETS_BUILD)
#define RN_API __declspec(dllexport)
#else
#define RN_API __declspec(dllimport)
#endif
#else
#define RN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rn_status {
  RN_OK = 0,
  RN_ERR_PARAMETER = 1,
  RN_ERR_PARSE = 2,
  RN_ERR_IO = 3,
  RN_ERR_DISCONNECTED = 4,
  RN_ERR_DEGENERATE_NODE = 5,
  RN_ERR_TRANSPORT_INFEASIBLE = 6,
  RN_ERR_DEGENERATE_DISTANCE = 7,
  RN_ERR_DEGENERATE_FLOW = 8,
  RN_ERR_EMPTY_NETWORK = 9,
  RN_ERR_NON_FINITE = 10,
  RN_ERR_STAGE_ORDER = 11,
  RN_ERR_CONFIG = 12,
  RN_ERR_INTERNAL = 13
} rn_status;

typedef struct rn_graph rn_graph;
typedef struct rn_dag rn_dag;
typedef struct rn_flow rn_flow;
typedef struct rn_prune_result rn_prune_result;

typedef struct rn_mass_params {
  double alpha;
  double beta;
  double delta;
} rn_mass_params;

RN_API const char* rn_version(void);
RN_API const char* rn_status_string(rn_status status);
RN_API const char* rn_last_error(void);

RN_API rn_mass_params rn_mass_params_default(void);

/* Graphs. */
RN_API rn_status rn_ws_generate(size_t n, size_t k, double p, uint64_t seed,
                                rn_graph** out);
RN_API rn_status rn_graph_read(const char* path, rn_graph** out);
RN_API rn_status rn_graph_write(const rn_graph* g, const char* path);
RN_API rn_status rn_graph_write_dot(const rn_graph* g, const char* path);
RN_API size_t rn_graph_node_count(const rn_graph* g);
RN_API size_t rn_graph_edge_count(const rn_graph* g);
RN_API int rn_graph_is_directed(const rn_graph* g);
RN_API int rn_graph_is_connected(const rn_graph* g);
RN_API rn_status rn_graph_edge(const rn_graph* g, size_t index, uint32_t* u,
                               uint32_t* v, double* w);
RN_API rn_status rn_graph_largest_component(const rn_graph* g, rn_graph** out);
RN_API void rn_graph_free(rn_graph* g);

/* DAGs: virtual input node n and output node n+1 after rn_to_dag. */
RN_API rn_status rn_to_dag(const rn_graph* g, rn_dag** out);
RN_API rn_status rn_dag_from_graph(const rn_graph* g, rn_dag** out);
RN_API rn_status rn_dag_graph(const rn_dag* dag, rn_graph** out);
RN_API uint32_t rn_dag_input(const rn_dag* dag);
RN_API uint32_t rn_dag_output(const rn_dag* dag);
RN_API size_t rn_dag_interior_node_count(const rn_dag* dag);
RN_API double rn_flops_estimate(const rn_dag* dag, size_t width, size_t classes);
RN_API void rn_dag_free(rn_dag* dag);

/* Curvature of each edge (by edge index) under unit weights. */
RN_API rn_status rn_curvature(const rn_dag* dag, const rn_mass_params* params,
                              double* kappa, size_t len);

/* Ricci flow. max_iter <= 0 and tol <= 0 select the defaults. */
RN_API rn_status rn_run_flow(const rn_dag* dag, const rn_mass_params* params,
                             int max_iter, double tol, rn_flow** out);
RN_API int rn_flow_iterations(const rn_flow* flow);
RN_API int rn_flow_converged(const rn_flow* flow);
RN_API double rn_flow_max_delta(const rn_flow* flow);
RN_API rn_status rn_flow_weights(const rn_flow* flow, double* weights,
                                 size_t len);
RN_API rn_status rn_flow_write_trace(const rn_flow* flow, const char* path);
RN_API void rn_flow_free(rn_flow* flow);

/* Pruning at the mean final weight. */
RN_API rn_status rn_prune(const rn_flow* flow, size_t width, size_t classes,
                          rn_prune_result** out);
RN_API double rn_prune_threshold(const rn_prune_result* pr);
RN_API size_t rn_prune_edges_removed(const rn_prune_result* pr);
RN_API size_t rn_prune_nodes_removed(const rn_prune_result* pr);
RN_API double rn_prune_flops_before(const rn_prune_result* pr);
RN_API double rn_prune_flops_after(const rn_prune_result* pr);
RN_API rn_status rn_prune_dag(const rn_prune_result* pr, rn_dag** out);
RN_API rn_status rn_prune_write_report(const rn_prune_result* pr, const char* path);
RN_API void rn_prune_free(rn_prune_result* pr);

/* Evaluation and reward. */
RN_API rn_status rn_surrogate_eval(const rn_dag* dag, size_t width,
                                   size_t classes, double* accuracy);
RN_API rn_status rn_compute_reward(double accuracy, double flops,
                                   double flops_baseline, double mu,
                                   double* reward);

/* Runs a harness command ("generate", "flow", "prune", "eval", "search",
 * "mu-sweep", "compare", "transfer") with a flat JSON config. On return
 * *report_json (when non-NULL) holds {"warnings":[...],"files":[...]} or,
 * on failure, {"error":...}; release it with rn_string_free. */
RN_API rn_status rn_run_command(const char* command, const char* config_json,
                                char** report_json);
RN_API void rn_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* RICCINETS_H */
