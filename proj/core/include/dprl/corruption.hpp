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

#ifndef DPRL_CORRUPTION_HPP_
#define DPRL_CORRUPTION_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dprl/dataset.hpp"
#include "dprl/train.hpp"

namespace dprl {

/// Parametric corruption family. Severity scales per kind (identity value
/// in parentheses):
///   gaussian_noise  pixel += N(0, s^2), s >= 0                     (s = 0)
///   shot_noise      pixel = Poisson(pixel * s) / s, s in [1, 512]  (s = 1)
///   impulse_noise   fraction s of pixels set to 0 or 1, s in [0,1] (s = 0)
///   brightness      pixel += s, s in [-1, 1]                       (s = 0)
///   contrast        pixel = 0.5 + (pixel - 0.5) * s, s >= 0        (s = 1)
///   rotate          bilinear rotation by s degrees, zero fill      (s = 0)
///   translate       shift right/down by trunc(s) pixels, zero fill (s = 0)
///   pixelate        box-downsample by round(s), nearest upsample   (s = 1)
/// All outputs are clamped to [0, 1]; shapes and labels are preserved.
enum class CorruptionKind {
  kGaussianNoise,
  kShotNoise,
  kImpulseNoise,
  kBrightness,
  kContrast,
  kRotate,
  kTranslate,
  kPixelate,
};

std::string corruption_name(CorruptionKind kind);
CorruptionKind corruption_from_name(std::string_view name);
std::vector<CorruptionKind> all_corruption_kinds();

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussianNoise;
  double severity = 0.0;

  bool operator==(const CorruptionSpec&) const = default;
};

/// The severity at which the corruption is an exact no-op.
double identity_severity(CorruptionKind kind);

/// Default severities used by the corruption table.
std::vector<CorruptionSpec> default_corruption_suite();

/// Pure per-image map; stochastic kinds derive one sub-stream per image
/// index from rng, so results do not depend on the worker count.
Dataset apply_corruption(const Dataset& dataset, CorruptionKind kind,
                         double severity, SeededRng& rng);

struct CorruptionRow {
  std::string label;  // "baseline", corruption name, or "average"
  double severity = 0.0;
  bool has_severity = false;
  std::vector<double> accuracies;  // one per model tag
};

/// Accuracy per model for the clean baseline and each corruption, plus an
/// average row over the corruption rows. When two or more models are given,
/// the difference column is first minus second.
struct CorruptionTable {
  std::vector<std::string> model_tags;
  std::vector<CorruptionRow> rows;

  static double difference(const CorruptionRow& row) {
    return row.accuracies[0] - row.accuracies[1];
  }
};

CorruptionTable corruption_table(
    const NetworkSpec& spec,
    std::span<const std::pair<std::string, const Parameters*>> models,
    const Dataset& dataset, std::span<const CorruptionSpec> kinds,
    SeededRng& rng);

void save_corruption_table_csv(const CorruptionTable& table,
                               const std::filesystem::path& path);

/// Severity rendered for file names: trailing zeros trimmed ("0.1", "2").
std::string severity_label(double severity);

}  // namespace dprl

#endif  // DPRL_CORRUPTION_HPP_
