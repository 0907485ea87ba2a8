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

#ifndef DPRL_TENSOR_HPP_
#define DPRL_TENSOR_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "dprl/rng.hpp"

namespace dprl {

std::size_t shape_count(const std::vector<std::size_t>& shape);

/// N-dimensional row-major float32 array. Values are immutable once a tensor
/// is returned from a library operation, so tensors may be shared across
/// threads. Reductions over tensors accumulate in 64-bit and round once.
class Tensor {
 public:
  Tensor() = default;

  /// Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  Tensor(std::vector<std::size_t> shape, std::vector<float> values);

  static Tensor full(std::vector<std::size_t> shape, float value);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }

  float* data() { return data_.data(); }
  const float* data() const { return data_.data(); }
  std::span<float> values() { return data_; }
  std::span<const float> values() const { return data_; }

  float& operator[](std::size_t flat_index) { return data_[flat_index]; }
  float operator[](std::size_t flat_index) const { return data_[flat_index]; }

  /// Same storage under a new shape; element counts must match.
  Tensor reshaped(std::vector<std::size_t> new_shape) const;

  bool all_finite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<float> data_;
};

/// Standard matrix product of a [m x k] and b [k x n]; 64-bit accumulation.
Tensor matmul(const Tensor& a, const Tensor& b);

double l2_norm(std::span<const float> v);
double l2_norm(const Tensor& v);

double l1_norm(std::span<const float> v);

/// n i.i.d. draws from N(0, std^2) produced with the Box-Muller transform
/// over the generator's uniforms. std = 0 returns zeros without advancing
/// the generator; otherwise exactly 2*ceil(n/2) uniforms are consumed.
Tensor gaussian_sample(SeededRng& rng, std::size_t n, double stddev);

}  // namespace dprl

#endif  // DPRL_TENSOR_HPP_
