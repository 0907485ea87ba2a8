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

#ifndef DPRL_TRAIN_HPP_
#define DPRL_TRAIN_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/network.hpp"

namespace dprl {

struct SgdConfig {
  double learning_rate = 0.05;
  std::size_t batch_size = 64;
  /// Full passes over the data; ignored when iterations > 0.
  std::size_t epochs = 1;
  /// Exact step count; 0 means run `epochs` epochs.
  std::size_t iterations = 0;
  std::uint64_t seed = 0;

  bool operator==(const SgdConfig&) const = default;
};

struct DpSgdConfig : SgdConfig {
  double noise_multiplier = 1.3;  // sigma
  double clip_bound = 1.0;        // C
  /// Noise std is sigma instead of sigma * C, isolating the clipping effect.
  bool decoupled_noise = false;
  /// Pass-through report annotations; never computed here.
  std::optional<double> privacy_epsilon_label;
  std::optional<double> privacy_delta_label;

  bool operator==(const DpSgdConfig&) const = default;
};

struct TrainTrace {
  std::vector<double> iteration_loss;  // batch-mean loss per step
  std::vector<double> epoch_train_accuracy;
  std::vector<double> epoch_test_accuracy;  // empty without a test set
  double wall_clock_seconds = 0.0;
  Parameters final_params;

  // Injected-noise diagnostics: running sum of squares and count of all
  // Gaussian noise coordinates drawn by dp_sgd_step.
  double noise_sq_sum = 0.0;
  std::size_t noise_draws = 0;
  double noise_empirical_std() const;
};

/// g / max(1, |g|_2 / C); the result's norm is min(|g|_2, C).
std::vector<float> clip_per_example_gradient(std::span<const float> gradient,
                                             double clip_bound);

/// In-place variant; returns the pre-clip norm.
double clip_gradient_in_place(std::span<float> gradient, double clip_bound);

/// The Gaussian step noise: N(0, (sigma C)^2 I), or N(0, sigma^2 I) when
/// decoupled_noise is set. sigma = 0 yields exact zeros without advancing
/// the generator, so a noiseless run is bit-identical to plain SGD.
Tensor draw_step_noise(SeededRng& rng, std::size_t dim, const DpSgdConfig& cfg);

/// theta -= learning_rate * gradient (64-bit arithmetic per coordinate).
void apply_gradient_step(Parameters& params, std::span<const float> gradient,
                         double learning_rate);

/// Plain SGD: theta -= lr * mean of per-example gradients.
void sgd_step(const NetworkSpec& spec, Parameters& params,
              std::span<const Tensor> xs, std::span<const std::size_t> ys,
              const SgdConfig& cfg, TrainTrace* trace = nullptr);

/// One DP-SGD update: per-example gradients are clipped to clip_bound,
/// summed, Gaussian noise is added, and the total is divided by the actual
/// batch length. Noise diagnostics are accumulated into *trace if given.
void dp_sgd_step(const NetworkSpec& spec, Parameters& params,
                 std::span<const Tensor> xs, std::span<const std::size_t> ys,
                 const DpSgdConfig& cfg, SeededRng& rng,
                 TrainTrace* trace = nullptr);

/// Epoch-wise seeded shuffle, sequential batches, short final batch divides
/// by its own length. rng drives initialization, shuffling, and noise.
TrainTrace train(const NetworkSpec& spec, const Dataset& train_data,
                 const Dataset* test_data, const SgdConfig& cfg,
                 SeededRng& rng);
TrainTrace train(const NetworkSpec& spec, const Dataset& train_data,
                 const Dataset* test_data, const DpSgdConfig& cfg,
                 SeededRng& rng);

/// Fraction of samples whose argmax prediction equals the label.
double evaluate_accuracy(const NetworkSpec& spec, const Parameters& params,
                         const Dataset& dataset);

/// TrainTrace as CSV: iteration,loss,epoch,train_acc,test_acc. Accuracy
/// columns are filled on epoch boundaries and empty elsewhere.
void save_trace_csv(const TrainTrace& trace, std::size_t steps_per_epoch,
                    const std::filesystem::path& path);

}  // namespace dprl

#endif  // DPRL_TRAIN_HPP_
