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

#include "dprl/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dprl/errors.hpp"
#include "dprl/parallel.hpp"

namespace dprl {
namespace {

double sign_of(float v) {
  if (v > 0.0f) return 1.0;
  if (v < 0.0f) return -1.0;
  return 0.0;
}

void check_pixel_bounds(double lo, double hi) {
  if (!(lo < hi)) {
    throw DomainError("pixel bounds must satisfy min < max");
  }
}

// One ascent step followed by projection onto the eps-ball around origin
// and the pixel box.
Tensor pgd_step(const Tensor& origin, const Tensor& current, const Tensor& grad,
                double alpha, double eps, double lo, double hi) {
  Tensor next(current.shape());
  for (std::size_t i = 0; i < current.size(); ++i) {
    double v = static_cast<double>(current[i]) + alpha * sign_of(grad[i]);
    const double center = static_cast<double>(origin[i]);
    v = std::min(std::max(v, center - eps), center + eps);
    v = std::min(std::max(v, lo), hi);
    next[i] = static_cast<float>(v);
  }
  return next;
}

struct ClassDistances {
  double l2 = std::numeric_limits<double>::infinity();
  double linf = std::numeric_limits<double>::infinity();
  std::size_t l2_class = 0;
  bool any = false;
};

}  // namespace

Tensor fgsm(const NetworkSpec& spec, const Parameters& params, const Tensor& x,
            std::size_t y, const FgsmConfig& cfg) {
  if (cfg.epsilon < 0.0) {
    throw DomainError("fgsm: epsilon must be >= 0");
  }
  check_pixel_bounds(cfg.pixel_min, cfg.pixel_max);
  const Tensor grad = backward_input(spec, params, x, y);
  Tensor adv(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = static_cast<double>(x[i]) + cfg.epsilon * sign_of(grad[i]);
    v = std::min(std::max(v, cfg.pixel_min), cfg.pixel_max);
    adv[i] = static_cast<float>(v);
  }
  return adv;
}

RobustnessCurve fgsm_curve(const NetworkSpec& spec, const Parameters& params,
                           const Dataset& dataset,
                           std::span<const double> eps_grid,
                           std::string model_tag) {
  if (eps_grid.empty()) {
    throw DomainError("fgsm_curve: epsilon grid is empty");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (eps_grid[i] < 0.0 || (i > 0 && eps_grid[i] <= eps_grid[i - 1])) {
      throw DomainError("fgsm_curve: epsilon grid must be non-negative and strictly increasing");
    }
  }
  if (dataset.size() == 0) {
    throw DomainError("fgsm_curve: dataset is empty");
  }

  const std::size_t n = dataset.size();
  const std::size_t m = eps_grid.size();
  // correct[e * n + i]: prediction at eps_grid[e] still matches the label.
  std::vector<std::uint8_t> correct(m * n, 0);
  parallel_for(n, [&](std::size_t i) {
    const Tensor x = dataset.sample(i);
    const std::size_t y = dataset.label(i);
    const Tensor grad = backward_input(spec, params, x, y);
    for (std::size_t e = 0; e < m; ++e) {
      Tensor adv(x.shape());
      for (std::size_t j = 0; j < x.size(); ++j) {
        double v = static_cast<double>(x[j]) + eps_grid[e] * sign_of(grad[j]);
        v = std::min(std::max(v, 0.0), 1.0);
        adv[j] = static_cast<float>(v);
      }
      correct[e * n + i] = predict_class(spec, params, adv) == y ? 1 : 0;
    }
  });

  RobustnessCurve curve;
  curve.model_tag = std::move(model_tag);
  curve.points.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      hits += correct[e * n + i];
    }
    curve.points.emplace_back(eps_grid[e],
                              static_cast<double>(hits) / static_cast<double>(n));
  }
  return curve;
}

Tensor pgd(const NetworkSpec& spec, const Parameters& params, const Tensor& x,
           std::size_t y, const PgdConfig& cfg) {
  if (cfg.epsilon < 0.0) {
    throw DomainError("pgd: epsilon must be >= 0");
  }
  if (cfg.step_size <= 0.0) {
    throw DomainError("pgd: step size must be > 0");
  }
  check_pixel_bounds(cfg.pixel_min, cfg.pixel_max);
  Tensor current = x;
  for (std::size_t t = 0; t < cfg.steps; ++t) {
    const Tensor grad = backward_input(spec, params, current, y);
    current = pgd_step(x, current, grad, cfg.step_size, cfg.epsilon,
                       cfg.pixel_min, cfg.pixel_max);
  }
  return current;
}

std::vector<double> pgd_table(const NetworkSpec& spec, const Parameters& params,
                              const Dataset& dataset,
                              std::span<const PgdSetting> settings) {
  if (dataset.size() == 0) {
    throw DomainError("pgd_table: dataset is empty");
  }
  std::vector<double> accuracies;
  accuracies.reserve(settings.size());
  for (const PgdSetting& setting : settings) {
    PgdConfig cfg;
    cfg.epsilon = setting.epsilon;
    cfg.steps = setting.steps;
    cfg.step_size = setting.step_size;
    std::vector<std::uint8_t> correct(dataset.size(), 0);
    parallel_for(dataset.size(), [&](std::size_t i) {
      const Tensor adv = pgd(spec, params, dataset.sample(i), dataset.label(i), cfg);
      correct[i] = predict_class(spec, params, adv) == dataset.label(i) ? 1 : 0;
    });
    std::size_t hits = 0;
    for (std::uint8_t c : correct) {
      hits += c;
    }
    accuracies.push_back(static_cast<double>(hits) /
                         static_cast<double>(dataset.size()));
  }
  return accuracies;
}

std::optional<std::size_t> pgd_iterations_to_flip(const NetworkSpec& spec,
                                                  const Parameters& params,
                                                  const Tensor& x, std::size_t y,
                                                  const PgdConfig& cfg,
                                                  std::size_t max_steps) {
  if (predict_class(spec, params, x) != y) {
    return 0;
  }
  Tensor current = x;
  for (std::size_t t = 1; t <= max_steps; ++t) {
    const Tensor grad = backward_input(spec, params, current, y);
    current = pgd_step(x, current, grad, cfg.step_size, cfg.epsilon,
                       cfg.pixel_min, cfg.pixel_max);
    if (predict_class(spec, params, current) != y) {
      return t;
    }
  }
  return std::nullopt;
}

BoundaryDistance deepfool_distance(const NetworkSpec& spec,
                                   const Parameters& params, const Tensor& x) {
  constexpr double kDegenerate = 1e-12;
  const Tensor logits = forward_logits(spec, params, x);
  const std::size_t predicted = argmax_class(logits);
  const Tensor grad_pred = logit_input_gradient(spec, params, x, predicted);

  ClassDistances best;
  for (std::size_t k = 0; k < spec.class_count; ++k) {
    if (k == predicted) {
      continue;
    }
    const Tensor grad_k = logit_input_gradient(spec, params, x, k);
    double sq = 0.0;
    double abssum = 0.0;
    for (std::size_t i = 0; i < grad_k.size(); ++i) {
      const double d =
          static_cast<double>(grad_pred[i]) - static_cast<double>(grad_k[i]);
      sq += d * d;
      abssum += std::abs(d);
    }
    const double l2_den = std::sqrt(sq);
    if (l2_den < kDegenerate) {
      continue;  // parallel logits, no finite boundary along this pair
    }
    const double gap = std::abs(static_cast<double>(logits[predicted]) -
                                static_cast<double>(logits[k]));
    const double l2 = gap / l2_den;
    const double linf = gap / abssum;
    if (l2 < best.l2) {
      best.l2 = l2;
      best.l2_class = k;
    }
    best.linf = std::min(best.linf, linf);
    best.any = true;
  }
  if (!best.any) {
    throw NumericalError("deepfool: all class boundaries are degenerate");
  }
  return {best.l2, best.linf, best.l2_class};
}

DistanceHistogram distance_histogram(const NetworkSpec& spec,
                                     const Parameters& params,
                                     const Dataset& dataset, DistanceNorm norm) {
  if (dataset.size() == 0) {
    throw DomainError("distance_histogram: dataset is empty");
  }
  constexpr std::size_t kBins = 64;
  std::vector<double> distances(dataset.size(),
                                std::numeric_limits<double>::quiet_NaN());
  parallel_for(dataset.size(), [&](std::size_t i) {
    try {
      const BoundaryDistance d = deepfool_distance(spec, params, dataset.sample(i));
      distances[i] = norm == DistanceNorm::kL2 ? d.l2 : d.linf;
    } catch (const NumericalError&) {
      // left as NaN, counted as skipped
    }
  });

  DistanceHistogram hist;
  hist.counts.assign(kBins, 0);
  double sum = 0.0;
  for (double d : distances) {
    if (std::isnan(d)) {
      ++hist.skipped;
      continue;
    }
    hist.max_value = std::max(hist.max_value, d);
    sum += d;
    ++hist.samples;
  }
  if (hist.samples == 0) {
    throw NumericalError("distance_histogram: no sample has a defined distance");
  }
  hist.mean = sum / static_cast<double>(hist.samples);
  hist.bin_width = hist.max_value / static_cast<double>(kBins);
  for (double d : distances) {
    if (std::isnan(d)) {
      continue;
    }
    std::size_t bin = 0;
    if (hist.bin_width > 0.0) {
      bin = std::min(kBins - 1, static_cast<std::size_t>(d / hist.bin_width));
    }
    ++hist.counts[bin];
  }
  return hist;
}

}  // namespace dprl
