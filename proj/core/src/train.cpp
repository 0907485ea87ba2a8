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

#include "dprl/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dprl/csv.hpp"
#include "dprl/errors.hpp"
#include "dprl/parallel.hpp"

namespace dprl {
namespace {

void check_sgd_config(const SgdConfig& cfg) {
  if (cfg.learning_rate <= 0.0) {
    throw DomainError("learning_rate must be > 0");
  }
  if (cfg.batch_size == 0) {
    throw DomainError("batch_size must be >= 1");
  }
}

void check_dp_config(const DpSgdConfig& cfg) {
  check_sgd_config(cfg);
  if (cfg.noise_multiplier < 0.0) {
    throw DomainError("noise_multiplier must be >= 0");
  }
  if (cfg.clip_bound <= 0.0) {
    throw DomainError("clip_bound must be > 0");
  }
}

// theta -= lr * (sum of rows + noise) / rows. Row order is fixed and the
// accumulator is 64-bit, so the result does not depend on how the rows were
// produced across workers.
void step_from_rows(Parameters& params, const PerExampleGradients& grads,
                    const Tensor* noise, double learning_rate) {
  std::vector<double> acc(grads.cols, 0.0);
  for (std::size_t r = 0; r < grads.rows; ++r) {
    const auto row = grads.row(r);
    for (std::size_t j = 0; j < grads.cols; ++j) {
      acc[j] += static_cast<double>(row[j]);
    }
  }
  if (noise != nullptr) {
    for (std::size_t j = 0; j < grads.cols; ++j) {
      acc[j] += static_cast<double>((*noise)[j]);
    }
  }
  auto theta = params.flat();
  const double b = static_cast<double>(grads.rows);
  for (std::size_t j = 0; j < grads.cols; ++j) {
    theta[j] = static_cast<float>(static_cast<double>(theta[j]) -
                                  learning_rate * (acc[j] / b));
  }
}

double mean_loss(const PerExampleGradients& grads) {
  double sum = 0.0;
  for (double l : grads.losses) {
    sum += l;
  }
  return sum / static_cast<double>(grads.rows);
}

struct BatchView {
  std::vector<Tensor> xs;
  std::vector<std::size_t> ys;
};

BatchView gather(const Dataset& data, std::span<const std::size_t> order,
                 std::size_t begin, std::size_t end) {
  BatchView batch;
  batch.xs.reserve(end - begin);
  batch.ys.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    batch.xs.push_back(data.sample(order[i]));
    batch.ys.push_back(data.label(order[i]));
  }
  return batch;
}

TrainTrace run_training(const NetworkSpec& spec, const Dataset& train_data,
                        const Dataset* test_data, const SgdConfig& cfg,
                        const DpSgdConfig* dp, SeededRng& rng) {
  validate(spec);
  if (train_data.size() == 0) {
    throw DomainError("train: dataset is empty");
  }

  const auto start = std::chrono::steady_clock::now();
  TrainTrace trace;
  Parameters params = init_parameters(spec, rng);

  const std::size_t n = train_data.size();
  const std::size_t steps_per_epoch = (n + cfg.batch_size - 1) / cfg.batch_size;
  const std::size_t total_steps =
      cfg.iterations > 0 ? cfg.iterations : cfg.epochs * steps_per_epoch;

  std::size_t step = 0;
  while (step < total_steps) {
    const std::vector<std::size_t> order = shuffled_indices(n, rng);
    for (std::size_t begin = 0; begin < n && step < total_steps;
         begin += cfg.batch_size) {
      const std::size_t end = std::min(begin + cfg.batch_size, n);
      const BatchView batch = gather(train_data, order, begin, end);
      if (dp != nullptr) {
        dp_sgd_step(spec, params, batch.xs, batch.ys, *dp, rng, &trace);
      } else {
        sgd_step(spec, params, batch.xs, batch.ys, cfg, &trace);
      }
      ++step;
    }
    trace.epoch_train_accuracy.push_back(
        evaluate_accuracy(spec, params, train_data));
    if (test_data != nullptr) {
      trace.epoch_test_accuracy.push_back(
          evaluate_accuracy(spec, params, *test_data));
    }
  }

  trace.final_params = std::move(params);
  trace.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return trace;
}

}  // namespace

double TrainTrace::noise_empirical_std() const {
  if (noise_draws == 0) {
    return 0.0;
  }
  return std::sqrt(noise_sq_sum / static_cast<double>(noise_draws));
}

std::vector<float> clip_per_example_gradient(std::span<const float> gradient,
                                             double clip_bound) {
  std::vector<float> out(gradient.begin(), gradient.end());
  clip_gradient_in_place(out, clip_bound);
  return out;
}

double clip_gradient_in_place(std::span<float> gradient, double clip_bound) {
  if (clip_bound <= 0.0) {
    throw DomainError("clip bound must be > 0");
  }
  const double norm = l2_norm(gradient);
  const double denom = std::max(1.0, norm / clip_bound);
  const double scale = 1.0 / denom;
  for (float& g : gradient) {
    g = static_cast<float>(static_cast<double>(g) * scale);
  }
  return norm;
}

Tensor draw_step_noise(SeededRng& rng, std::size_t dim, const DpSgdConfig& cfg) {
  check_dp_config(cfg);
  const double std =
      cfg.decoupled_noise ? cfg.noise_multiplier : cfg.noise_multiplier * cfg.clip_bound;
  return gaussian_sample(rng, dim, std);
}

void apply_gradient_step(Parameters& params, std::span<const float> gradient,
                         double learning_rate) {
  auto theta = params.flat();
  if (gradient.size() != theta.size()) {
    throw DimensionError("apply_gradient_step: gradient length mismatch");
  }
  for (std::size_t j = 0; j < theta.size(); ++j) {
    theta[j] = static_cast<float>(static_cast<double>(theta[j]) -
                                  learning_rate * static_cast<double>(gradient[j]));
  }
}

void sgd_step(const NetworkSpec& spec, Parameters& params,
              std::span<const Tensor> xs, std::span<const std::size_t> ys,
              const SgdConfig& cfg, TrainTrace* trace) {
  check_sgd_config(cfg);
  const PerExampleGradients grads = backward_params(spec, params, xs, ys);
  if (trace != nullptr) {
    trace->iteration_loss.push_back(mean_loss(grads));
  }
  step_from_rows(params, grads, nullptr, cfg.learning_rate);
}

void dp_sgd_step(const NetworkSpec& spec, Parameters& params,
                 std::span<const Tensor> xs, std::span<const std::size_t> ys,
                 const DpSgdConfig& cfg, SeededRng& rng, TrainTrace* trace) {
  check_dp_config(cfg);
  PerExampleGradients grads = backward_params(spec, params, xs, ys);
  parallel_for(grads.rows, [&](std::size_t r) {
    clip_gradient_in_place(grads.row(r), cfg.clip_bound);
  });
  const Tensor noise = draw_step_noise(rng, grads.cols, cfg);
  if (trace != nullptr) {
    trace->iteration_loss.push_back(mean_loss(grads));
    if (cfg.noise_multiplier > 0.0) {
      for (std::size_t j = 0; j < noise.size(); ++j) {
        trace->noise_sq_sum +=
            static_cast<double>(noise[j]) * static_cast<double>(noise[j]);
      }
      trace->noise_draws += noise.size();
    }
  }
  step_from_rows(params, grads, &noise, cfg.learning_rate);
}

TrainTrace train(const NetworkSpec& spec, const Dataset& train_data,
                 const Dataset* test_data, const SgdConfig& cfg,
                 SeededRng& rng) {
  check_sgd_config(cfg);
  return run_training(spec, train_data, test_data, cfg, nullptr, rng);
}

TrainTrace train(const NetworkSpec& spec, const Dataset& train_data,
                 const Dataset* test_data, const DpSgdConfig& cfg,
                 SeededRng& rng) {
  check_dp_config(cfg);
  return run_training(spec, train_data, test_data, cfg, &cfg, rng);
}

double evaluate_accuracy(const NetworkSpec& spec, const Parameters& params,
                         const Dataset& dataset) {
  if (dataset.size() == 0) {
    throw DomainError("evaluate_accuracy: dataset is empty");
  }
  std::vector<std::uint8_t> correct(dataset.size(), 0);
  parallel_for(dataset.size(), [&](std::size_t i) {
    correct[i] =
        predict_class(spec, params, dataset.sample(i)) == dataset.label(i) ? 1 : 0;
  });
  std::size_t hits = 0;
  for (std::uint8_t c : correct) {
    hits += c;
  }
  return static_cast<double>(hits) / static_cast<double>(dataset.size());
}

void save_trace_csv(const TrainTrace& trace, std::size_t steps_per_epoch,
                    const std::filesystem::path& path) {
  CsvWriter csv(path, "train_trace");
  csv.header({"iteration", "loss", "epoch", "train_acc", "test_acc"});
  for (std::size_t i = 0; i < trace.iteration_loss.size(); ++i) {
    std::string epoch, train_acc, test_acc;
    const bool boundary = steps_per_epoch > 0 && (i + 1) % steps_per_epoch == 0;
    const bool last = i + 1 == trace.iteration_loss.size();
    std::size_t epoch_idx =
        steps_per_epoch > 0 ? (i + 1) / steps_per_epoch : 0;
    if (last && !boundary) {
      epoch_idx += 1;  // partial final epoch
    }
    if ((boundary || last) && epoch_idx >= 1 &&
        epoch_idx <= trace.epoch_train_accuracy.size()) {
      epoch = CsvWriter::num(epoch_idx);
      train_acc = CsvWriter::num(trace.epoch_train_accuracy[epoch_idx - 1]);
      if (epoch_idx <= trace.epoch_test_accuracy.size()) {
        test_acc = CsvWriter::num(trace.epoch_test_accuracy[epoch_idx - 1]);
      }
    }
    csv.row({CsvWriter::num(i + 1), CsvWriter::num(trace.iteration_loss[i]),
             epoch, train_acc, test_acc});
  }
}

}  // namespace dprl
