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

#ifndef RICCINETS_EVALUATOR_HPP
#define RICCINETS_EVALUATOR_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "riccinets/flow.hpp"
#include "riccinets/graph.hpp"

namespace riccinets {

/// Gaussian-blob classification data, row-major features.
struct Dataset {
  std::size_t input_dim = 0;
  std::size_t classes = 0;
  std::uint64_t seed = 0;
  std::vector<double> train_x;
  std::vector<int> train_y;
  std::vector<double> test_x;
  std::vector<int> test_y;

  std::size_t train_size() const { return train_y.size(); }
  std::size_t test_size() const { return test_y.size(); }
};

struct DatasetSpec {
  std::size_t n_train = 600;
  std::size_t n_test = 200;
  std::size_t input_dim = 16;
  std::size_t classes = 3;
};

/// Class c is centred at 3 * u_c for a seeded random unit vector u_c; samples
/// add N(0, I) noise. Labels cycle through the classes before shuffling, so
/// each split is balanced within one sample per class.
Dataset make_dataset(std::uint64_t seed, const DatasetSpec& spec = {});

/// Cache file: "split,label,x0,...". Reads validate shape and labels.
void write_dataset(const Dataset& data, const std::filesystem::path& path);
Dataset read_dataset(const std::filesystem::path& path);

/// Dense network wired along a Dag.
///
/// The input node emits P x + b_in. With edge gates g_uv = 2 sigmoid(s_uv),
/// an interior node v computes ReLU(W_v * mean_{(u,v)} g_uv h_u + b_v). The
/// output node takes the same gated mean and applies the classifier.
/// Parameters share one flat vector; unit weights carry a pruning mask.
class TinyNet {
 public:
  TinyNet() = default;
  TinyNet(Dag dag, std::size_t width, std::size_t input_dim,
          std::size_t classes, std::uint64_t seed);

  const Dag& dag() const { return dag_; }
  std::size_t width() const { return width_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t classes() const { return classes_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const double> params() const { return params_; }
  std::span<double> mutable_params() { return params_; }
  std::size_t param_count() const { return params_.size(); }

  /// Offsets into params() of each block.
  std::size_t input_weight_offset() const { return in_w_; }
  std::size_t unit_weight_offset(NodeId v) const;
  std::size_t gate_offset() const { return gate_; }
  std::size_t classifier_offset() const { return cls_w_; }

  /// Node-unit matrix entries (the prunable weights).
  std::size_t weights_total() const { return units_.size() * width_ * width_; }
  std::size_t weights_remaining() const;
  /// Mask over unit matrix entries in unit order (1 = kept).
  std::span<const char> unit_mask() const { return mask_; }
  void set_unit_mask(std::vector<char> mask);

  std::vector<double> logits(std::span<const double> x) const;
  int predict(std::span<const double> x) const;

  /// Mean cross-entropy over the samples; when `grad` is non-null it
  /// receives the exact gradient w.r.t. params() (masked entries get 0).
  double loss(std::span<const double> xs, std::span<const int> ys,
              std::vector<double>* grad) const;

  double accuracy(std::span<const double> xs, std::span<const int> ys) const;

 private:
  struct Unit {
    NodeId node;
    std::size_t w;  // W_v, width x width, row-major
    std::size_t b;
  };
  struct Activations {
    std::vector<double> h, pre, agg, o;
  };
  std::vector<double> forward(const double* x, Activations& act) const;
  double sample_loss(const double* x, int y, std::vector<double>* grad) const;

  Dag dag_;
  std::vector<NodeId> order_;
  std::size_t width_ = 0;
  std::size_t input_dim_ = 0;
  std::size_t classes_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<Unit> units_;
  std::vector<long> unit_of_;  // node -> index into units_, -1 otherwise
  std::size_t in_w_ = 0, in_b_ = 0, gate_ = 0, cls_w_ = 0, cls_b_ = 0;
  std::vector<double> params_;
  std::vector<char> mask_;
};

/// Unit weights uniform in +-sqrt(6/fan_in), projection and classifier in
/// +-1/sqrt(fan_in); biases and gate scalars zero.
TinyNet build_network(const Dag& dag, std::size_t width, std::size_t input_dim,
                      std::size_t classes, std::uint64_t seed);

struct TrainConfig {
  std::size_t epochs = 40;
  std::size_t batch = 64;
  double lr = 0.05;
};

struct EvalReport {
  double accuracy = 0.0;
  double flops = 0.0;
  std::size_t weights_total = 0;
  std::size_t weights_remaining = 0;
  double seconds = 0.0;
  std::vector<double> train_loss;  // [0] before training, then per epoch
};

/// Minibatch SGD on softmax cross-entropy. The shuffle stream derives from
/// the network seed, so results are a pure function of (net, data, config).
/// Throws Error(kNonFinite) when the loss diverges.
EvalReport train_eval(TinyNet& net, const Dataset& data,
                      const TrainConfig& config = {});

/// Test accuracy of a net as-is, with structural FLOPs and weight counts.
EvalReport evaluate_network(const TinyNet& net, const Dataset& data);

/// Fast deterministic stand-in for training.
///
/// With n interior nodes and rho = (|E| - |V| + 1) / n independent cycles
/// per interior node:
///   accuracy = (1 - exp(-n / 8)) * (0.4 + 0.6 * rho / (rho + 0.5))
/// which lies in [0, 1), rises with size and with path redundancy, and is
/// lowest for chains (rho = 0).
EvalReport surrogate_eval(const Dag& dag, std::size_t width = kDefaultWidth,
                          std::size_t classes = kDefaultClasses);

/// Zeroes the total - ceil((1 - q) * total) smallest-magnitude unit weights
/// (ties by index) and masks them; gates, projections, biases and the
/// classifier are untouched.
TinyNet magnitude_prune(const TinyNet& net, double q);

/// CSV "accuracy,flops,weights_total,weights_remaining,seconds".
std::string format_eval_report_csv(const EvalReport& r);

}  // namespace riccinets

#endif  // RICCINETS_EVALUATOR_HPP
