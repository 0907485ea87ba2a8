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

#ifndef DPRL_SVG_HPP_
#define DPRL_SVG_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dprl/geometry.hpp"

namespace dprl {

struct PlotSeries {
  std::string tag;
  std::vector<std::pair<double, double>> points;
};

/// Line plot: axes with tick labels and exactly one polyline per series.
/// Rendering is deterministic; identical inputs give identical bytes.
void emit_curve_plot(std::span<const PlotSeries> series, std::string_view x_label,
                     std::string_view y_label, const std::filesystem::path& path);

/// Bar plot of uniform bins starting at 0; one rect per non-empty bin.
void emit_histogram_plot(double bin_width, std::span<const std::size_t> counts,
                         std::string_view x_label,
                         const std::filesystem::path& path);

/// Curve plot with log10-scaled y. Values below the floor (1e-12), including
/// zeros and negatives, are rendered at the floor.
void emit_profile_plot(std::span<const PlotSeries> series,
                       std::string_view x_label, std::string_view y_label,
                       const std::filesystem::path& path);

/// One filled cell per grid point, distinct fill per class id, center cell
/// marked. The normal axis runs vertically, matching the boundary-normal
/// orientation of the cross-section.
void emit_cross_section_svg(const CrossSection& section,
                            const std::filesystem::path& path);

constexpr double kProfileLogFloor = 1e-12;

}  // namespace dprl

#endif  // DPRL_SVG_HPP_
