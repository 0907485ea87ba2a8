// Copyright 2026 The dprl Authors
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

#ifndef DPRL_NETWORK_HPP_
#define DPRL_NETWORK_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dprl/tensor.hpp"

namespace dprl {

struct DenseSpec {
  std::size_t in = 0;
  std::size_t out = 0;
  bool operator==(const DenseSpec&) const = default;
};

/// Valid (no padding) cross-correlation, stride 1, square kernel of 3 or 5.
struct Conv2dSpec {
  std::size_t kernel = 5;
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  bool operator==(const Conv2dSpec&) const = default;
};

/// 2x2 window, stride 2. Odd trailing rows/columns are dropped.
struct MaxPoolSpec {
  bool operator==(const MaxPoolSpec&) const = default;
};

struct ReluSpec {
  bool operator==(const ReluSpec&) const = default;
};

using LayerSpec = std::variant<DenseSpec, Conv2dSpec, MaxPoolSpec, ReluSpec>;

/// Feed-forward topology. The layer chain must compose shape-wise and end in
/// exactly class_count logits; validate() enforces both.
struct NetworkSpec {
  std::vector<std::size_t> input_shape;
  std::vector<LayerSpec> layers;
  std::size_t class_count = 10;

  bool operator==(const NetworkSpec&) const = default;
};

void validate(const NetworkSpec& spec);
std::size_t parameter_count(const NetworkSpec& spec);

/// Per-layer window into the flat parameter vector. Layers without
/// parameters have zero-length slices.
struct LayerSlice {
  std::size_t weight_offset = 0;
  std::size_t weight_count = 0;
  std::size_t bias_offset = 0;
  std::size_t bias_count = 0;
};

/// Flat float32 parameter vector plus the index map from each layer's
/// weights and biases into it. Layer views alias the flat storage, so the
/// flat <-> layer round trip is lossless by construction.
class Parameters {
 public:
  Parameters() = default;
  explicit Parameters(const NetworkSpec& spec);  // zero-initialized

  std::size_t size() const { return flat_.size(); }
  std::span<float> flat() { return flat_; }
  std::span<const float> flat() const { return flat_; }

  const std::vector<LayerSlice>& slices() const { return slices_; }
  std::span<float> weights(std::size_t layer);
  std::span<const float> weights(std::size_t layer) const;
  std::span<float> bias(std::size_t layer);
  std::span<const float> bias(std::size_t layer) const;

  bool operator==(const Parameters&) const = default;

 private:
  std::vector<float> flat_;
  std::vector<LayerSlice> slices_;
};

/// He-style initialization: weights ~ N(0, 2/fan_in), biases zero.
Parameters init_parameters(const NetworkSpec& spec, SeededRng& rng);

/// Lowest index wins ties.
std::size_t argmax_class(const Tensor& logits);

Tensor forward_logits(const NetworkSpec& spec, const Parameters& params,
                      const Tensor& x);
std::size_t predict_class(const NetworkSpec& spec, const Parameters& params,
                          const Tensor& x);

/// Per-sample softmax cross-entropy (natural log); no batch averaging.
double loss(const NetworkSpec& spec, const Parameters& params, const Tensor& x,
            std::size_t y);

/// One row per batch example: the flattened gradient of loss(x_i, y_i) with
/// respect to the parameters, plus the row's l2 norm and the example's loss.
struct PerExampleGradients {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;        // rows x cols, row-major
  std::vector<double> row_norms;
  std::vector<double> losses;

  std::span<float> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const float> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
};

/// Reverse-mode per-example parameter gradients. Rows are computed in
/// parallel but always land in batch order.
PerExampleGradients backward_params(const NetworkSpec& spec,
                                    const Parameters& params,
                                    std::span<const Tensor> xs,
                                    std::span<const std::size_t> ys);

/// Gradient of loss with respect to the input; same shape as x.
Tensor backward_input(const NetworkSpec& spec, const Parameters& params,
                      const Tensor& x, std::size_t y);

/// Gradient of the k-th logit with respect to the input.
Tensor logit_input_gradient(const NetworkSpec& spec, const Parameters& params,
                            const Tensor& x, std::size_t k);

/// Shipped reference architectures:
///   mlp_mnist   784 -> 200 -> 200 -> 10 MLP for 28x28 inputs
///   mlp_synth   64 -> 64 -> 10 MLP for 8x8 synthetic data
///   lenet_small conv 5x5x8, pool, conv 5x5x16, pool, dense 128, dense 10
///   lenet_paper conv 5x5x20, pool, conv 5x5x50, pool, dense 500, dense 500,
///               dense 10
NetworkSpec preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace dprl

#endif  // DPRL_NETWORK_HPP_
