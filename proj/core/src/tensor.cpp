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

#include "dprl/tensor.hpp"

#include <cmath>
#include <numbers>

#include "dprl/errors.hpp"

namespace dprl {

std::size_t shape_count(const std::vector<std::size_t>& shape) {
  std::size_t count = 1;
  for (std::size_t extent : shape) {
    count *= extent;
  }
  return count;
}

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_count(shape_), 0.0f) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<float> values)
    : shape_(std::move(shape)), data_(std::move(values)) {
  if (shape_count(shape_) != data_.size()) {
    throw DimensionError("tensor: shape does not match element count");
  }
}

Tensor Tensor::full(std::vector<std::size_t> shape, float value) {
  Tensor t(std::move(shape));
  for (float& v : t.data_) {
    v = value;
  }
  return t;
}

Tensor Tensor::reshaped(std::vector<std::size_t> new_shape) const {
  if (shape_count(new_shape) != data_.size()) {
    throw DimensionError("reshape: element count mismatch");
  }
  return Tensor(std::move(new_shape), data_);
}

bool Tensor::all_finite() const {
  for (float v : data_) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError("matmul: operands must be rank-2");
  }
  const std::size_t m = a.shape()[0];
  const std::size_t k = a.shape()[1];
  const std::size_t n = b.shape()[1];
  if (b.shape()[0] != k) {
    throw DimensionError("matmul: inner extents do not match");
  }

  Tensor out({m, n});
  const float* pa = a.data();
  const float* pb = b.data();
  float* po = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t) {
        acc += static_cast<double>(pa[i * k + t]) * static_cast<double>(pb[t * n + j]);
      }
      po[i * n + j] = static_cast<float>(acc);
    }
  }
  return out;
}

double l2_norm(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) {
    acc += static_cast<double>(x) * static_cast<double>(x);
  }
  return std::sqrt(acc);
}

double l2_norm(const Tensor& v) {
  return l2_norm(v.values());
}

double l1_norm(std::span<const float> v) {
  double acc = 0.0;
  for (float x : v) {
    acc += std::abs(static_cast<double>(x));
  }
  return acc;
}

Tensor gaussian_sample(SeededRng& rng, std::size_t n, double stddev) {
  if (stddev < 0.0) {
    throw DomainError("gaussian_sample: std must be >= 0");
  }
  Tensor out({n});
  if (stddev == 0.0) {
    return out;
  }
  float* p = out.data();
  for (std::size_t i = 0; i < n; i += 2) {
    // 1 - u in (0, 1] keeps the log argument positive.
    const double u1 = 1.0 - rng.next_unit();
    const double u2 = rng.next_unit();
    const double radius = std::sqrt(-2.0 * std::log(u1)) * stddev;
    const double angle = 2.0 * std::numbers::pi * u2;
    p[i] = static_cast<float>(radius * std::cos(angle));
    if (i + 1 < n) {
      p[i + 1] = static_cast<float>(radius * std::sin(angle));
    }
  }
  return out;
}

}  // namespace dprl
