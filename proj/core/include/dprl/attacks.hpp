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

#ifndef DPRL_ATTACKS_HPP_
#define DPRL_ATTACKS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/network.hpp"

namespace dprl {

struct FgsmConfig {
  double epsilon = 0.1;  // l-inf budget in pixel units
  double pixel_min = 0.0;
  double pixel_max = 1.0;
};

struct PgdConfig {
  double epsilon = 0.1;
  double step_size = 0.01;  // alpha
  std::size_t steps = 40;
  double pixel_min = 0.0;
  double pixel_max = 1.0;
};

/// Distances to the closest locally linearized decision boundary. The l-inf
/// distance uses the l1 gradient-difference norm in its denominator.
struct BoundaryDistance {
  double l2 = 0.0;
  double linf = 0.0;
  std::size_t nearest_class = 0;  // argmin of the l2 ranking
};

/// Ordered (epsilon, accuracy) pairs for one model tag.
struct RobustnessCurve {
  std::string model_tag;
  std::vector<std::pair<double, double>> points;
};

struct PgdSetting {
  double epsilon = 0.1;
  std::size_t steps = 40;
  double step_size = 0.01;

  bool operator==(const PgdSetting&) const = default;
};

enum class DistanceNorm { kL2, kLinf };

struct DistanceHistogram {
  std::vector<std::size_t> counts;  // 64 uniform bins over [0, max_value]
  double bin_width = 0.0;
  double max_value = 0.0;
  double mean = 0.0;
  std::size_t samples = 0;  // samples with a defined distance
  std::size_t skipped = 0;  // samples with degenerate boundary geometry
};

/// x_adv = clamp(x + eps * sign(grad_x loss), pixel bounds); sign(0) = 0, so
/// eps = 0 returns x unchanged.
Tensor fgsm(const NetworkSpec& spec, const Parameters& params, const Tensor& x,
            std::size_t y, const FgsmConfig& cfg);

/// Accuracy under per-sample FGSM at each epsilon of the (strictly
/// increasing) grid. The eps = 0 entry equals clean accuracy.
RobustnessCurve fgsm_curve(const NetworkSpec& spec, const Parameters& params,
                           const Dataset& dataset,
                           std::span<const double> eps_grid,
                           std::string model_tag);

/// Iterated FGSM from x_adv^0 = x (no random start): each step adds
/// alpha * sign(grad), then projects onto [x - eps, x + eps] and the pixel
/// box. |x_adv - x|_inf <= eps always holds.
Tensor pgd(const NetworkSpec& spec, const Parameters& params, const Tensor& x,
           std::size_t y, const PgdConfig& cfg);

/// PGD accuracy per (epsilon, steps, alpha) setting.
std::vector<double> pgd_table(const NetworkSpec& spec, const Parameters& params,
                              const Dataset& dataset,
                              std::span<const PgdSetting> settings);

/// Smallest step count t <= max_steps at which the PGD iterate is no longer
/// predicted as y. Returns 0 when x is already misclassified and nullopt
/// when no iterate flips within max_steps.
std::optional<std::size_t> pgd_iterations_to_flip(const NetworkSpec& spec,
                                                  const Parameters& params,
                                                  const Tensor& x, std::size_t y,
                                                  const PgdConfig& cfg,
                                                  std::size_t max_steps);

/// One-shot linearized boundary distances minimized over the non-predicted
/// classes. The reference class is the model's own prediction at x. Classes
/// whose l2 gradient-difference norm falls below 1e-12 are skipped; if every
/// class is skipped the geometry is degenerate and a NumericalError is
/// thrown.
BoundaryDistance deepfool_distance(const NetworkSpec& spec,
                                   const Parameters& params, const Tensor& x);

/// Per-sample deepfool distances binned into 64 uniform bins over [0, max].
DistanceHistogram distance_histogram(const NetworkSpec& spec,
                                     const Parameters& params,
                                     const Dataset& dataset, DistanceNorm norm);

}  // namespace dprl

#endif  // DPRL_ATTACKS_HPP_
