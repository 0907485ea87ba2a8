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

#ifndef DPRL_GEOMETRY_HPP_
#define DPRL_GEOMETRY_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "dprl/network.hpp"

namespace dprl {

/// Dense symmetric matrix of doubles, row-major.
struct SymmetricMatrix {
  std::size_t n = 0;
  std::vector<double> a;

  SymmetricMatrix() = default;
  explicit SymmetricMatrix(std::size_t size) : n(size), a(size * size, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  double trace() const;
  double frobenius() const;
  double off_diagonal_frobenius() const;
};

using InputGradientFn = std::function<Tensor(const Tensor&)>;

/// Central finite differences of an analytic gradient: column j is
/// (grad(x + h e_j) - grad(x - h e_j)) / (2h), symmetrized as (H + H^T)/2.
/// If max_asymmetry is given it receives the largest |H_ij - H_ji| observed
/// before symmetrization.
SymmetricMatrix hessian_from_gradient(const InputGradientFn& gradient,
                                      const Tensor& x, double fd_step,
                                      double* max_asymmetry = nullptr);

/// Loss Hessian with respect to the input, built from the analytic input
/// gradient with step h = 1e-3. Input dimension is capped at 4096 (dense
/// regime).
SymmetricMatrix input_hessian(const NetworkSpec& spec, const Parameters& params,
                              const Tensor& x, std::size_t y,
                              double fd_step = 1e-3);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted
/// descending. Converges when the off-diagonal Frobenius norm drops below
/// 1e-9 * |A|_F; throws NumericalError after max_sweeps sweeps.
std::vector<double> jacobi_eigenvalues(SymmetricMatrix matrix,
                                       std::size_t max_sweeps = 100);

/// Top-m input-Hessian eigenvalues averaged over a sample set. Spectra are
/// sorted descending per sample before the elementwise average.
struct CurvatureProfile {
  std::vector<double> eigenvalues;  // length m, descending
  std::size_t sample_count = 0;
};

CurvatureProfile profile_from_hessians(std::span<const SymmetricMatrix> hessians,
                                       std::size_t m);

CurvatureProfile curvature_profile(const NetworkSpec& spec,
                                   const Parameters& params,
                                   std::span<const Tensor> xs,
                                   std::span<const std::size_t> ys,
                                   std::size_t m = 15);

/// Unit normal of the closest linearized boundary at x:
/// (grad f_pred - grad f_k*) normalized, k* the l2-argmin deepfool class.
Tensor boundary_normal(const NetworkSpec& spec, const Parameters& params,
                       const Tensor& x);

/// Predicted-class grid over the plane spanned by the boundary normal and a
/// random orthogonal direction. classes is resolution x resolution,
/// row-major; rows walk the normal axis from -half_extent to +half_extent
/// and columns walk the tangent axis likewise. The center cell is exactly x.
struct CrossSection {
  Tensor center;
  Tensor normal_axis;    // unit
  Tensor tangent_axis;   // unit, orthogonal to normal_axis
  double half_extent_normal = 0.0;
  double half_extent_tangent = 0.0;
  std::size_t resolution = 0;
  std::vector<std::uint16_t> classes;

  std::uint16_t at(std::size_t normal_idx, std::size_t tangent_idx) const {
    return classes[normal_idx * resolution + tangent_idx];
  }
};

/// resolution must be odd and >= 3 so the center cell is x itself.
CrossSection cross_section(const NetworkSpec& spec, const Parameters& params,
                           const Tensor& x, double half_extent,
                           std::size_t resolution, SeededRng& rng);

}  // namespace dprl

#endif  // DPRL_GEOMETRY_HPP_
