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

#include "dprl/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "dprl/errors.hpp"

namespace dprl {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 62.0;
constexpr double kMarginRight = 18.0;
constexpr double kMarginTop = 18.0;
constexpr double kMarginBottom = 46.0;

const char* series_color(std::size_t i) {
  static const char* kPalette[] = {"#4c78a8", "#f58518", "#e45756", "#72b7b2",
                                   "#54a24b", "#eeca3b", "#b279a2", "#ff9da6",
                                   "#9d755d", "#bab0ac"};
  return kPalette[i % 10];
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void tighten(double v) { lo = hi = v; }
  double span() const { return hi - lo; }
};

class Canvas {
 public:
  Canvas(const std::filesystem::path& path, Range x, Range y)
      : out_(path), x_(pad(x)), y_(pad(y)) {
    if (!out_) {
      throw IoError("cannot write " + path.string());
    }
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
         << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
         << kHeight << "\">\n";
  }

  double sx(double x) const {
    return kMarginLeft +
           (x - x_.lo) / x_.span() * (kWidth - kMarginLeft - kMarginRight);
  }
  double sy(double y) const {
    return kHeight - kMarginBottom -
           (y - y_.lo) / y_.span() * (kHeight - kMarginTop - kMarginBottom);
  }

  void axes(std::string_view x_label, std::string_view y_label,
            bool log_ticks = false) {
    const double x0 = kMarginLeft, x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom, y1 = kMarginTop;
    out_ << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\""
         << fmt(x1) << "\" y2=\"" << fmt(y0) << "\" stroke=\"black\"/>\n";
    out_ << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\""
         << fmt(x0) << "\" y2=\"" << fmt(y1) << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double fx = x_.lo + x_.span() * i / 4.0;
      const double fy = y_.lo + y_.span() * i / 4.0;
      out_ << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(y0 + 16.0)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt_tick(fx)
           << "</text>\n";
      const std::string ytick =
          log_ticks ? ("1e" + fmt_tick(fy)) : fmt_tick(fy);
      out_ << "<text x=\"" << fmt(x0 - 6.0) << "\" y=\"" << fmt(sy(fy) + 4.0)
           << "\" font-size=\"11\" text-anchor=\"end\">" << ytick
           << "</text>\n";
    }
    out_ << "<text x=\"" << fmt((x0 + x1) / 2.0) << "\" y=\""
         << fmt(kHeight - 10.0) << "\" font-size=\"13\" text-anchor=\"middle\">"
         << x_label << "</text>\n";
    out_ << "<text x=\"14\" y=\"" << fmt((y0 + y1) / 2.0)
         << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
         << fmt((y0 + y1) / 2.0) << ")\">" << y_label << "</text>\n";
  }

  void polyline(std::span<const std::pair<double, double>> points,
                const char* color) {
    out_ << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.8\" points=\"";
    bool first = true;
    for (const auto& [x, y] : points) {
      if (!first) {
        out_ << ' ';
      }
      out_ << fmt(sx(x)) << ',' << fmt(sy(y));
      first = false;
    }
    out_ << "\"/>\n";
  }

  void bar(double x_lo, double x_hi, double value, const char* color) {
    const double left = sx(x_lo);
    const double right = sx(x_hi);
    const double top = sy(value);
    const double bottom = sy(y_.lo);
    out_ << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\""
         << fmt(right - left) << "\" height=\"" << fmt(bottom - top)
         << "\" fill=\"" << color << "\" stroke=\"none\"/>\n";
  }

  void legend(std::span<const PlotSeries> series) {
    double y = kMarginTop + 14.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      out_ << "<text x=\"" << fmt(kMarginLeft + 10.0) << "\" y=\"" << fmt(y)
           << "\" font-size=\"12\" fill=\"" << series_color(i) << "\">"
           << series[i].tag << "</text>\n";
      y += 15.0;
    }
  }

  void raw(const std::string& s) { out_ << s; }

  void close() { out_ << "</svg>\n"; }

 private:
  static Range pad(Range r) {
    if (r.span() <= 0.0) {
      r.lo -= 0.5;
      r.hi += 0.5;
    }
    return r;
  }

  std::ofstream out_;
  Range x_, y_;
};

void check_series(std::span<const PlotSeries> series) {
  if (series.empty()) {
    throw DomainError("plot: no series");
  }
  for (const PlotSeries& s : series) {
    if (s.points.empty()) {
      throw DomainError("plot: series '" + s.tag + "' is empty");
    }
  }
}

}  // namespace

void emit_curve_plot(std::span<const PlotSeries> series, std::string_view x_label,
                     std::string_view y_label,
                     const std::filesystem::path& path) {
  check_series(series);
  Range x, y;
  x.tighten(series[0].points[0].first);
  y.tighten(series[0].points[0].second);
  for (const PlotSeries& s : series) {
    for (const auto& [px, py] : s.points) {
      x.include(px);
      y.include(py);
    }
  }
  Canvas canvas(path, x, y);
  canvas.axes(x_label, y_label);
  for (std::size_t i = 0; i < series.size(); ++i) {
    canvas.polyline(series[i].points, series_color(i));
  }
  canvas.legend(series);
  canvas.close();
}

void emit_histogram_plot(double bin_width, std::span<const std::size_t> counts,
                         std::string_view x_label,
                         const std::filesystem::path& path) {
  if (counts.empty()) {
    throw DomainError("histogram plot: no bins");
  }
  const double width = bin_width > 0.0 ? bin_width : 1.0;
  Range x, y;
  x.tighten(0.0);
  x.include(width * static_cast<double>(counts.size()));
  y.tighten(0.0);
  for (std::size_t c : counts) {
    y.include(static_cast<double>(c));
  }
  Canvas canvas(path, x, y);
  canvas.axes(x_label, "count");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) {
      continue;
    }
    canvas.bar(width * static_cast<double>(i), width * static_cast<double>(i + 1),
               static_cast<double>(counts[i]), series_color(0));
  }
  canvas.close();
}

void emit_profile_plot(std::span<const PlotSeries> series,
                       std::string_view x_label, std::string_view y_label,
                       const std::filesystem::path& path) {
  check_series(series);
  std::vector<PlotSeries> scaled(series.begin(), series.end());
  for (PlotSeries& s : scaled) {
    for (auto& [x, y] : s.points) {
      y = std::log10(std::max(y, kProfileLogFloor));
    }
  }
  Range x, y;
  x.tighten(scaled[0].points[0].first);
  y.tighten(scaled[0].points[0].second);
  for (const PlotSeries& s : scaled) {
    for (const auto& [px, py] : s.points) {
      x.include(px);
      y.include(py);
    }
  }
  Canvas canvas(path, x, y);
  canvas.axes(x_label, y_label, /*log_ticks=*/true);
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    canvas.polyline(scaled[i].points, series_color(i));
  }
  canvas.legend(scaled);
  canvas.close();
}

void emit_cross_section_svg(const CrossSection& section,
                            const std::filesystem::path& path) {
  if (section.resolution == 0) {
    throw DomainError("cross section plot: empty grid");
  }
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  const std::size_t r = section.resolution;
  const double cell = 440.0 / static_cast<double>(r);
  const double origin = 20.0;
  const double size = 440.0 + 2.0 * origin;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n";
  // Normal axis vertical: the last row (+half_extent) is drawn at the top.
  for (std::size_t row = 0; row < r; ++row) {
    for (std::size_t col = 0; col < r; ++col) {
      const std::uint16_t cls = section.at(row, col);
      const double px = origin + cell * static_cast<double>(col);
      const double py = origin + cell * static_cast<double>(r - 1 - row);
      out << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\""
          << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\""
          << series_color(cls) << "\" stroke=\"none\"/>\n";
    }
  }
  const double center = origin + cell * (static_cast<double>(r) / 2.0);
  out << "<circle cx=\"" << fmt(center) << "\" cy=\"" << fmt(center)
      << "\" r=\"" << fmt(std::max(2.0, cell * 0.3))
      << "\" fill=\"black\" stroke=\"white\" stroke-width=\"1\"/>\n";
  out << "</svg>\n";
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

}  // namespace dprl
