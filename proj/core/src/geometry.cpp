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

#include "dprl/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "dprl/attacks.hpp"
#include "dprl/errors.hpp"
#include "dprl/parallel.hpp"

namespace dprl {

double SymmetricMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += at(i, i);
  }
  return t;
}

double SymmetricMatrix::frobenius() const {
  double sq = 0.0;
  for (double v : a) {
    sq += v * v;
  }
  return std::sqrt(sq);
}

double SymmetricMatrix::off_diagonal_frobenius() const {
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) {
        sq += at(i, j) * at(i, j);
      }
    }
  }
  return std::sqrt(sq);
}

SymmetricMatrix hessian_from_gradient(const InputGradientFn& gradient,
                                      const Tensor& x, double fd_step,
                                      double* max_asymmetry) {
  if (fd_step <= 0.0) {
    throw DomainError("hessian: finite-difference step must be > 0");
  }
  const std::size_t d = x.size();
  SymmetricMatrix raw(d);
  parallel_for(d, [&](std::size_t j) {
    Tensor plus = x;
    Tensor minus = x;
    plus[j] = static_cast<float>(static_cast<double>(x[j]) + fd_step);
    minus[j] = static_cast<float>(static_cast<double>(x[j]) - fd_step);
    const Tensor grad_plus = gradient(plus);
    const Tensor grad_minus = gradient(minus);
    if (grad_plus.size() != d || grad_minus.size() != d) {
      throw DimensionError("hessian: gradient length does not match input");
    }
    for (std::size_t i = 0; i < d; ++i) {
      raw.at(i, j) = (static_cast<double>(grad_plus[i]) -
                      static_cast<double>(grad_minus[i])) /
                     (2.0 * fd_step);
    }
  });

  if (max_asymmetry != nullptr) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        worst = std::max(worst, std::abs(raw.at(i, j) - raw.at(j, i)));
      }
    }
    *max_asymmetry = worst;
  }

  SymmetricMatrix h(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      h.at(i, j) = 0.5 * (raw.at(i, j) + raw.at(j, i));
    }
  }
  return h;
}

SymmetricMatrix input_hessian(const NetworkSpec& spec, const Parameters& params,
                              const Tensor& x, std::size_t y, double fd_step) {
  if (x.size() > 4096) {
    throw DomainError("input_hessian: input dimension exceeds 4096");
  }
  return hessian_from_gradient(
      [&](const Tensor& point) { return backward_input(spec, params, point, y); },
      x, fd_step);
}

std::vector<double> jacobi_eigenvalues(SymmetricMatrix matrix,
                                       std::size_t max_sweeps) {
  const std::size_t n = matrix.n;
  if (n == 0) {
    return {};
  }
  const double total_norm = matrix.frobenius();
  if (total_norm == 0.0) {
    return std::vector<double>(n, 0.0);
  }
  const double threshold = 1e-9 * total_norm;

  bool converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    if (matrix.off_diagonal_frobenius() < threshold) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = matrix.at(p, q);
        if (apq == 0.0) {
          continue;
        }
        const double app = matrix.at(p, p);
        const double aqq = matrix.at(q, q);
        const double tau = (aqq - app) / (2.0 * apq);
        double t;
        if (tau >= 0.0) {
          t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
        } else {
          t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == p || i == q) {
            continue;
          }
          const double aip = matrix.at(i, p);
          const double aiq = matrix.at(i, q);
          matrix.at(i, p) = matrix.at(p, i) = c * aip - s * aiq;
          matrix.at(i, q) = matrix.at(q, i) = s * aip + c * aiq;
        }
        matrix.at(p, p) = app - t * apq;
        matrix.at(q, q) = aqq + t * apq;
        matrix.at(p, q) = matrix.at(q, p) = 0.0;
      }
    }
  }
  if (!converged && matrix.off_diagonal_frobenius() >= threshold) {
    throw NumericalError("jacobi: no convergence within " +
                         std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<double> eigenvalues(n);
  for (std::size_t i = 0; i < n; ++i) {
    eigenvalues[i] = matrix.at(i, i);
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<double>());
  return eigenvalues;
}

CurvatureProfile profile_from_hessians(std::span<const SymmetricMatrix> hessians,
                                       std::size_t m) {
  if (hessians.empty()) {
    throw DomainError("curvature profile: no samples");
  }
  const std::size_t d = hessians.front().n;
  if (m == 0 || m > d) {
    throw DomainError("curvature profile: m must be in [1, input dimension]");
  }
  std::vector<double> mean(d, 0.0);
  for (const SymmetricMatrix& h : hessians) {
    if (h.n != d) {
      throw DimensionError("curvature profile: mixed Hessian sizes");
    }
    const std::vector<double> eig = jacobi_eigenvalues(h);
    for (std::size_t i = 0; i < d; ++i) {
      mean[i] += eig[i];
    }
  }
  for (double& v : mean) {
    v /= static_cast<double>(hessians.size());
  }
  CurvatureProfile profile;
  profile.sample_count = hessians.size();
  profile.eigenvalues.assign(mean.begin(), mean.begin() + m);
  return profile;
}

CurvatureProfile curvature_profile(const NetworkSpec& spec,
                                   const Parameters& params,
                                   std::span<const Tensor> xs,
                                   std::span<const std::size_t> ys,
                                   std::size_t m) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw DomainError("curvature_profile: samples must be non-empty and aligned");
  }
  std::vector<SymmetricMatrix> hessians(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    hessians[i] = input_hessian(spec, params, xs[i], ys[i]);
  });
  return profile_from_hessians(hessians, m);
}

Tensor boundary_normal(const NetworkSpec& spec, const Parameters& params,
                       const Tensor& x) {
  const BoundaryDistance dist = deepfool_distance(spec, params, x);
  const std::size_t predicted = predict_class(spec, params, x);
  const Tensor grad_pred = logit_input_gradient(spec, params, x, predicted);
  const Tensor grad_near = logit_input_gradient(spec, params, x, dist.nearest_class);
  Tensor direction(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    direction[i] = static_cast<float>(static_cast<double>(grad_pred[i]) -
                                      static_cast<double>(grad_near[i]));
  }
  const double norm = l2_norm(direction);
  if (norm < 1e-12) {
    throw NumericalError("boundary_normal: degenerate direction");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    direction[i] = static_cast<float>(static_cast<double>(direction[i]) / norm);
  }
  return direction;
}

CrossSection cross_section(const NetworkSpec& spec, const Parameters& params,
                           const Tensor& x, double half_extent,
                           std::size_t resolution, SeededRng& rng) {
  if (resolution < 3 || resolution % 2 == 0) {
    throw DomainError("cross_section: resolution must be odd and >= 3");
  }
  if (half_extent <= 0.0) {
    throw DomainError("cross_section: half extent must be > 0");
  }
  const Tensor normal = boundary_normal(spec, params, x);
  const std::size_t d = x.size();

  // Gram-Schmidt a random Gaussian direction against the normal; retry on
  // a near-zero residual.
  Tensor tangent;
  for (int attempt = 0; attempt < 16; ++attempt) {
    const Tensor draw = gaussian_sample(rng, d, 1.0);
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      dot += static_cast<double>(draw[i]) * static_cast<double>(normal[i]);
    }
    Tensor residual({d});
    for (std::size_t i = 0; i < d; ++i) {
      residual[i] = static_cast<float>(static_cast<double>(draw[i]) -
                                       dot * static_cast<double>(normal[i]));
    }
    const double norm = l2_norm(residual);
    if (norm >= 1e-6) {
      for (std::size_t i = 0; i < d; ++i) {
        residual[i] = static_cast<float>(static_cast<double>(residual[i]) / norm);
      }
      tangent = residual.reshaped(x.shape());
      break;
    }
  }
  if (tangent.size() == 0) {
    throw NumericalError("cross_section: could not build an orthogonal direction");
  }

  CrossSection section;
  section.center = x;
  section.normal_axis = normal;
  section.tangent_axis = tangent;
  section.half_extent_normal = half_extent;
  section.half_extent_tangent = half_extent;
  section.resolution = resolution;
  section.classes.assign(resolution * resolution, 0);

  const std::ptrdiff_t center_idx = static_cast<std::ptrdiff_t>(resolution / 2);
  const double step =
      2.0 * half_extent / static_cast<double>(resolution - 1);
  parallel_for(resolution, [&](std::size_t row) {
    const double along_normal =
        static_cast<double>(static_cast<std::ptrdiff_t>(row) - center_idx) * step;
    Tensor point(x.shape());
    for (std::size_t col = 0; col < resolution; ++col) {
      const double along_tangent =
          static_cast<double>(static_cast<std::ptrdiff_t>(col) - center_idx) * step;
      for (std::size_t i = 0; i < d; ++i) {
        point[i] = static_cast<float>(
            static_cast<double>(x[i]) +
            along_tangent * static_cast<double>(tangent[i]) +
            along_normal * static_cast<double>(normal[i]));
      }
      section.classes[row * resolution + col] =
          static_cast<std::uint16_t>(predict_class(spec, params, point));
    }
  });
  return section;
}

}  // namespace dprl
