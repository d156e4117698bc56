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

#include "riccinets/evaluator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "riccinets/error.hpp"
#include "riccinets/rng.hpp"

namespace riccinets {

Dataset make_dataset(std::uint64_t seed, const DatasetSpec& spec) {
  if (spec.classes == 0 || spec.input_dim == 0 || spec.n_train < spec.classes ||
      spec.n_test < spec.classes) {
    throw Error(ErrorCode::kParameter,
                "dataset sizes must be at least the number of classes");
  }
  Dataset d;
  d.input_dim = spec.input_dim;
  d.classes = spec.classes;
  d.seed = seed;
  Rng rng(seed);

  std::vector<double> centers(spec.classes * spec.input_dim);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    double norm = 0.0;
    double* row = centers.data() + c * spec.input_dim;
    for (std::size_t i = 0; i < spec.input_dim; ++i) {
      row[i] = rng.normal();
      norm += row[i] * row[i];
    }
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < spec.input_dim; ++i) row[i] *= 3.0 / norm;
  }

  auto fill = [&](std::size_t n, std::vector<double>& xs, std::vector<int>& ys) {
    ys.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      ys[i] = static_cast<int>(i % spec.classes);
    rng.shuffle(ys);
    xs.resize(n * spec.input_dim);
    for (std::size_t i = 0; i < n; ++i) {
      const double* c = centers.data() + ys[i] * spec.input_dim;
      for (std::size_t k = 0; k < spec.input_dim; ++k) {
        xs[i * spec.input_dim + k] = c[k] + rng.normal();
      }
    }
  };
  fill(spec.n_train, d.train_x, d.train_y);
  fill(spec.n_test, d.test_x, d.test_y);
  return d;
}

void write_dataset(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "# dataset seed=" << data.seed << " input_dim=" << data.input_dim
      << " classes=" << data.classes << "\n";
  char buf[64];
  auto rows = [&](const char* split, const std::vector<double>& xs,
                  const std::vector<int>& ys) {
    for (std::size_t i = 0; i < ys.size(); ++i) {
      out << split << ',' << ys[i];
      for (std::size_t k = 0; k < data.input_dim; ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", xs[i * data.input_dim + k]);
        out << buf;
      }
      out << '\n';
    }
  };
  rows("train", data.train_x, data.train_y);
  rows("test", data.test_x, data.test_y);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  Dataset d;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kParse, path.string() + ": line " +
                                       std::to_string(lineno) + ": " + msg);
  };
  if (!std::getline(in, line)) fail("empty dataset file");
  ++lineno;
  unsigned long long seed = 0;
  std::size_t dim = 0, classes = 0;
  if (std::sscanf(line.c_str(), "# dataset seed=%llu input_dim=%zu classes=%zu",
                  &seed, &dim, &classes) != 3 ||
      dim == 0 || classes == 0) {
    fail("bad dataset header");
  }
  d.seed = seed;
  d.input_dim = dim;
  d.classes = classes;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string split, cell;
    std::getline(ls, split, ',');
    if (split != "train" && split != "test") fail("unknown split");
    if (!std::getline(ls, cell, ',')) fail("missing label");
    const int label = std::atoi(cell.c_str());
    if (label < 0 || static_cast<std::size_t>(label) >= classes)
      fail("label out of range");
    auto& xs = split == "train" ? d.train_x : d.test_x;
    auto& ys = split == "train" ? d.train_y : d.test_y;
    std::size_t count = 0;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) fail("bad feature value");
      xs.push_back(v);
      ++count;
    }
    if (count != dim) fail("expected " + std::to_string(dim) + " features");
    ys.push_back(label);
  }
  return d;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Edge gate 2*sigmoid(s): 1 at s = 0, in (0, 2).
double gate_of(double s) { return 2.0 * sigmoid(s); }
double gate_slope(double s) {
  const double q = sigmoid(s);
  return 2.0 * q * (1.0 - q);
}

}  // namespace

TinyNet::TinyNet(Dag dag, std::size_t width, std::size_t input_dim,
                 std::size_t classes, std::uint64_t seed)
    : dag_(std::move(dag)), width_(width), input_dim_(input_dim),
      classes_(classes), seed_(seed) {
  if (width == 0 || input_dim == 0 || classes == 0) {
    throw Error(ErrorCode::kParameter, "network dimensions must be positive");
  }
  order_ = dag_.topological_order();
  const Graph& g = dag_.graph();
  const std::size_t d = width_;
  std::size_t off = 0;
  in_w_ = off;
  off += d * input_dim_;
  in_b_ = off;
  off += d;
  unit_of_.assign(g.node_count(), -1);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!dag_.is_interior(v)) continue;
    unit_of_[v] = static_cast<long>(units_.size());
    units_.push_back({v, off, off + d * d});
    off += d * d + d;
  }
  gate_ = off;
  off += g.edge_count();
  cls_w_ = off;
  off += classes_ * d;
  cls_b_ = off;
  off += classes_;
  params_.assign(off, 0.0);
  mask_.assign(units_.size() * d * d, 1);
}

std::size_t TinyNet::unit_weight_offset(NodeId v) const {
  if (v >= unit_of_.size() || unit_of_[v] < 0) {
    throw Error(ErrorCode::kParameter, "node has no unit");
  }
  return units_[static_cast<std::size_t>(unit_of_[v])].w;
}

std::size_t TinyNet::weights_remaining() const {
  std::size_t n = 0;
  for (char m : mask_) n += m ? 1 : 0;
  return n;
}

void TinyNet::set_unit_mask(std::vector<char> mask) {
  if (mask.size() != mask_.size()) {
    throw Error(ErrorCode::kParameter, "mask size mismatch");
  }
  mask_ = std::move(mask);
  const std::size_t dd = width_ * width_;
  for (std::size_t u = 0; u < units_.size(); ++u) {
    for (std::size_t k = 0; k < dd; ++k) {
      if (!mask_[u * dd + k]) params_[units_[u].w + k] = 0.0;
    }
  }
}

std::vector<double> TinyNet::forward(const double* x, Activations& act) const {
  const Graph& g = dag_.graph();
  const std::size_t n = g.node_count();
  const std::size_t d = width_;
  const double* P = params_.data();
  act.h.assign(n * d, 0.0);
  act.pre.assign(n * d, 0.0);
  act.agg.assign(n * d, 0.0);
  act.o.assign(d, 0.0);
  std::vector<double>& h = act.h;
  std::vector<double>& pre = act.pre;
  std::vector<double>& agg = act.agg;
  std::vector<double>& o = act.o;

  {
    double* hin = h.data() + dag_.input() * d;
    for (std::size_t r = 0; r < d; ++r) {
      double s = P[in_b_ + r];
      const double* row = P + in_w_ + r * input_dim_;
      for (std::size_t k = 0; k < input_dim_; ++k) s += row[k] * x[k];
      hin[r] = s;
    }
  }
  for (NodeId v : order_) {
    if (!dag_.is_interior(v)) continue;
    double* a = agg.data() + v * d;
    const auto ins = g.in_edges(v);
    const double inv = 1.0 / static_cast<double>(ins.size());
    for (const Incidence& inc : ins) {
      const double gate = inv * gate_of(P[gate_ + inc.edge]);
      const double* hu = h.data() + inc.node * d;
      for (std::size_t k = 0; k < d; ++k) a[k] += gate * hu[k];
    }
    const Unit& u = units_[static_cast<std::size_t>(unit_of_[v])];
    double* pv = pre.data() + v * d;
    double* hv = h.data() + v * d;
    for (std::size_t r = 0; r < d; ++r) {
      double s = P[u.b + r];
      const double* row = P + u.w + r * d;
      for (std::size_t k = 0; k < d; ++k) s += row[k] * a[k];
      pv[r] = s;
      hv[r] = s > 0.0 ? s : 0.0;
    }
  }

  const NodeId out = dag_.output();
  const auto out_in = g.in_edges(out);
  const double inv_k = 1.0 / static_cast<double>(out_in.size());
  for (const Incidence& inc : out_in) {
    const double gate = gate_of(P[gate_ + inc.edge]);
    const double* hu = h.data() + inc.node * d;
    for (std::size_t k = 0; k < d; ++k) o[k] += inv_k * gate * hu[k];
  }
  std::vector<double> z(classes_);
  for (std::size_t c = 0; c < classes_; ++c) {
    double s = P[cls_b_ + c];
    for (std::size_t k = 0; k < d; ++k) s += P[cls_w_ + c * d + k] * o[k];
    z[c] = s;
  }
  return z;
}

double TinyNet::sample_loss(const double* x, int y,
                            std::vector<double>* grad) const {
  const Graph& g = dag_.graph();
  const std::size_t n = g.node_count();
  const std::size_t d = width_;
  const double* P = params_.data();
  Activations act;
  const std::vector<double> z = forward(x, act);
  const std::vector<double>& h = act.h;
  const std::vector<double>& pre = act.pre;
  const std::vector<double>& agg = act.agg;
  const std::vector<double>& o = act.o;
  const auto out_in = g.in_edges(dag_.output());
  const double inv_k = 1.0 / static_cast<double>(out_in.size());
  const double zmax = *std::max_element(z.begin(), z.end());
  double denom = 0.0;
  for (double v : z) denom += std::exp(v - zmax);
  const double loss = -(z[static_cast<std::size_t>(y)] - zmax - std::log(denom));
  if (!grad) return loss;

  std::vector<double>& G = *grad;
  std::vector<double> dh(n * d, 0.0);
  std::vector<double> dz(classes_);
  for (std::size_t c = 0; c < classes_; ++c) {
    dz[c] = std::exp(z[c] - zmax) / denom - (static_cast<int>(c) == y ? 1.0 : 0.0);
  }
  std::vector<double> dout(d, 0.0);
  for (std::size_t c = 0; c < classes_; ++c) {
    G[cls_b_ + c] += dz[c];
    for (std::size_t k = 0; k < d; ++k) {
      G[cls_w_ + c * d + k] += dz[c] * o[k];
      dout[k] += dz[c] * P[cls_w_ + c * d + k];
    }
  }
  for (const Incidence& inc : out_in) {
    const double s_uv = P[gate_ + inc.edge];
    const double gate = gate_of(s_uv);
    const double* hu = h.data() + inc.node * d;
    double* dhu = dh.data() + inc.node * d;
    double dot = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      dhu[k] += inv_k * gate * dout[k];
      dot += dout[k] * hu[k];
    }
    G[gate_ + inc.edge] += inv_k * dot * gate_slope(s_uv);
  }

  std::vector<double> dpre(d), dagg(d);
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    const NodeId v = *it;
    if (!dag_.is_interior(v)) continue;
    const std::size_t ui = static_cast<std::size_t>(unit_of_[v]);
    const Unit& u = units_[ui];
    const double* pv = pre.data() + v * d;
    const double* a = agg.data() + v * d;
    const double* dhv = dh.data() + v * d;
    std::fill(dagg.begin(), dagg.end(), 0.0);
    for (std::size_t r = 0; r < d; ++r) {
      dpre[r] = pv[r] > 0.0 ? dhv[r] : 0.0;
      if (dpre[r] == 0.0) continue;
      G[u.b + r] += dpre[r];
      const double* row = P + u.w + r * d;
      const char* m = mask_.data() + ui * d * d + r * d;
      for (std::size_t k = 0; k < d; ++k) {
        if (m[k]) G[u.w + r * d + k] += dpre[r] * a[k];
        dagg[k] += row[k] * dpre[r];
      }
    }
    const auto ins = g.in_edges(v);
    const double inv = 1.0 / static_cast<double>(ins.size());
    for (const Incidence& inc : ins) {
      const double s_uv = P[gate_ + inc.edge];
      const double gate = inv * gate_of(s_uv);
      const double* hu = h.data() + inc.node * d;
      double* dhu = dh.data() + inc.node * d;
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        dhu[k] += gate * dagg[k];
        dot += dagg[k] * hu[k];
      }
      G[gate_ + inc.edge] += inv * dot * gate_slope(s_uv);
    }
  }

  const double* dhin = dh.data() + dag_.input() * d;
  for (std::size_t r = 0; r < d; ++r) {
    G[in_b_ + r] += dhin[r];
    for (std::size_t k = 0; k < input_dim_; ++k) {
      G[in_w_ + r * input_dim_ + k] += dhin[r] * x[k];
    }
  }
  return loss;
}

double TinyNet::loss(std::span<const double> xs, std::span<const int> ys,
                     std::vector<double>* grad) const {
  if (xs.size() != ys.size() * input_dim_) {
    throw Error(ErrorCode::kParameter, "feature matrix shape mismatch");
  }
  if (grad) grad->assign(params_.size(), 0.0);
  if (ys.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    total += sample_loss(xs.data() + i * input_dim_, ys[i], grad);
  }
  const double inv = 1.0 / static_cast<double>(ys.size());
  if (grad) {
    for (double& v : *grad) v *= inv;
  }
  return total * inv;
}

std::vector<double> TinyNet::logits(std::span<const double> x) const {
  if (x.size() != input_dim_) {
    throw Error(ErrorCode::kParameter, "input has the wrong dimension");
  }
  Activations act;
  return forward(x.data(), act);
}

int TinyNet::predict(std::span<const double> x) const {
  const auto z = logits(x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

double TinyNet::accuracy(std::span<const double> xs,
                         std::span<const int> ys) const {
  if (ys.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (predict(xs.subspan(i * input_dim_, input_dim_)) == ys[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(ys.size());
}

TinyNet build_network(const Dag& dag, std::size_t width, std::size_t input_dim,
                      std::size_t classes, std::uint64_t seed) {
  TinyNet net(dag, width, input_dim, classes, seed);
  Rng rng(seed);
  auto params = net.mutable_params();
  auto fill = [&](std::size_t off, std::size_t count, std::size_t fan_in,
                  double gain) {
    const double s = gain / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i)
      params[off + i] = (2.0 * rng.uniform() - 1.0) * s;
  };
  fill(net.input_weight_offset(), width * input_dim, input_dim, 1.0);
  for (NodeId v = 0; v < dag.graph().node_count(); ++v) {
    if (dag.is_interior(v)) fill(net.unit_weight_offset(v), width * width, width, std::sqrt(6.0));
  }
  fill(net.classifier_offset(), classes * width, width, 1.0);
  return net;
}

EvalReport evaluate_network(const TinyNet& net, const Dataset& data) {
  EvalReport r;
  r.accuracy = net.accuracy(data.test_x, data.test_y);
  r.flops = flops_estimate(net.dag(), net.width(), net.classes());
  r.weights_total = net.weights_total();
  r.weights_remaining = net.weights_remaining();
  return r;
}

EvalReport train_eval(TinyNet& net, const Dataset& data,
                      const TrainConfig& config) {
  if (data.input_dim != net.input_dim() || data.classes != net.classes()) {
    throw Error(ErrorCode::kParameter, "dataset does not match the network");
  }
  if (config.batch == 0) {
    throw Error(ErrorCode::kParameter, "batch size must be positive");
  }
  const auto start = std::chrono::steady_clock::now();
  EvalReport report;
  auto check = [&](double loss, std::size_t epoch) {
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kNonFinite,
                  "training loss became non-finite at epoch " +
                      std::to_string(epoch));
    }
    report.train_loss.push_back(loss);
  };
  check(net.loss(data.train_x, data.train_y, nullptr), 0);

  const std::size_t n = data.train_size();
  const std::size_t dim = data.input_dim;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(derive_seed(net.seed(), 0x7a11));
  std::vector<double> bx, grad;
  std::vector<int> by;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(idx);
    for (std::size_t start_i = 0; start_i < n; start_i += config.batch) {
      const std::size_t end_i = std::min(n, start_i + config.batch);
      bx.clear();
      by.clear();
      for (std::size_t i = start_i; i < end_i; ++i) {
        const double* x = data.train_x.data() + idx[i] * dim;
        bx.insert(bx.end(), x, x + dim);
        by.push_back(data.train_y[idx[i]]);
      }
      net.loss(bx, by, &grad);
      auto params = net.mutable_params();
      for (std::size_t k = 0; k < params.size(); ++k)
        params[k] -= config.lr * grad[k];
    }
    check(net.loss(data.train_x, data.train_y, nullptr), epoch);
  }

  const EvalReport tail = evaluate_network(net, data);
  report.accuracy = tail.accuracy;
  report.flops = tail.flops;
  report.weights_total = tail.weights_total;
  report.weights_remaining = tail.weights_remaining;
  report.seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

EvalReport surrogate_eval(const Dag& dag, std::size_t width,
                          std::size_t classes) {
  EvalReport r;
  const double n = static_cast<double>(dag.interior_node_count());
  const double edges = static_cast<double>(dag.graph().edge_count());
  const double nodes = static_cast<double>(dag.graph().node_count());
  if (n > 0.0) {
    const double rho = std::max(0.0, (edges - nodes + 1.0) / n);
    r.accuracy = (1.0 - std::exp(-n / 8.0)) * (0.4 + 0.6 * rho / (rho + 0.5));
  }
  r.flops = flops_estimate(dag, width, classes);
  r.weights_total = dag.interior_node_count() * width * width;
  r.weights_remaining = r.weights_total;
  return r;
}

TinyNet magnitude_prune(const TinyNet& net, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw Error(ErrorCode::kParameter, "prune fraction must lie in [0,1]");
  }
  TinyNet out = net;
  const std::size_t total = net.weights_total();
  const double keep_exact = (1.0 - q) * static_cast<double>(total);
  // Guard against 0.5 * 4 = 2.0000000000000004 rounding up to 3.
  const auto keep = static_cast<std::size_t>(std::ceil(keep_exact - 1e-9));
  const std::size_t drop = total - std::min(keep, total);

  const std::size_t dd = net.width() * net.width();
  std::vector<std::size_t> offsets;  // unit entry -> param index
  offsets.reserve(total);
  for (NodeId v = 0; v < net.dag().graph().node_count(); ++v) {
    if (!net.dag().is_interior(v)) continue;
    const std::size_t w = net.unit_weight_offset(v);
    for (std::size_t k = 0; k < dd; ++k) offsets.push_back(w + k);
  }
  const auto params = net.params();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::abs(params[offsets[a]]) <
                            std::abs(params[offsets[b]]);
                   });
  std::vector<char> mask(net.unit_mask().begin(), net.unit_mask().end());
  for (std::size_t i = 0; i < drop; ++i) mask[order[i]] = 0;
  out.set_unit_mask(std::move(mask));
  return out;
}

std::string format_eval_report_csv(const EvalReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu,%zu,%.6f\n", r.accuracy,
                r.flops, r.weights_total, r.weights_remaining, r.seconds);
  return std::string("accuracy,flops,weights_total,weights_remaining,seconds\n") +
         buf;
}

}  // namespace riccinets
