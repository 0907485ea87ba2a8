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

#include "dprl/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "dprl/csv.hpp"
#include "dprl/errors.hpp"
#include "dprl/parallel.hpp"

namespace dprl {
namespace {

struct ImageView {
  const float* in;
  float* out;
  std::size_t h, w;
};

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Knuth's product-of-uniforms sampler; fine for the capped rate s <= 512.
std::size_t poisson_draw(SeededRng& rng, double rate) {
  const double limit = std::exp(-rate);
  std::size_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.next_unit();
  } while (p > limit);
  return k - 1;
}

void corrupt_gaussian(ImageView img, double s, SeededRng& rng) {
  const Tensor noise = gaussian_sample(rng, img.h * img.w, s);
  for (std::size_t i = 0; i < img.h * img.w; ++i) {
    img.out[i] = static_cast<float>(
        clamp01(static_cast<double>(img.in[i]) + static_cast<double>(noise[i])));
  }
}

void corrupt_shot(ImageView img, double s, SeededRng& rng) {
  for (std::size_t i = 0; i < img.h * img.w; ++i) {
    const double rate = static_cast<double>(img.in[i]) * s;
    img.out[i] = static_cast<float>(
        clamp01(static_cast<double>(poisson_draw(rng, rate)) / s));
  }
}

void corrupt_impulse(ImageView img, double s, SeededRng& rng) {
  for (std::size_t i = 0; i < img.h * img.w; ++i) {
    if (rng.next_unit() < s) {
      img.out[i] = (rng.next_u64() & 1) ? 1.0f : 0.0f;
    } else {
      img.out[i] = img.in[i];
    }
  }
}

void corrupt_brightness(ImageView img, double s) {
  for (std::size_t i = 0; i < img.h * img.w; ++i) {
    img.out[i] = static_cast<float>(clamp01(static_cast<double>(img.in[i]) + s));
  }
}

void corrupt_contrast(ImageView img, double s) {
  for (std::size_t i = 0; i < img.h * img.w; ++i) {
    img.out[i] = static_cast<float>(
        clamp01(0.5 + (static_cast<double>(img.in[i]) - 0.5) * s));
  }
}

void corrupt_rotate(ImageView img, double degrees) {
  double deg = std::fmod(degrees, 360.0);
  if (deg < 0.0) {
    deg += 360.0;
  }
  double c, s;
  // Exact values at quarter turns keep those rotations lossless.
  if (deg == 0.0) {
    c = 1.0; s = 0.0;
  } else if (deg == 90.0) {
    c = 0.0; s = 1.0;
  } else if (deg == 180.0) {
    c = -1.0; s = 0.0;
  } else if (deg == 270.0) {
    c = 0.0; s = -1.0;
  } else {
    const double rad = deg * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
  }

  const double cx = (static_cast<double>(img.w) - 1.0) / 2.0;
  const double cy = (static_cast<double>(img.h) - 1.0) / 2.0;
  for (std::size_t r = 0; r < img.h; ++r) {
    for (std::size_t col = 0; col < img.w; ++col) {
      // Counterclockwise rotation; inverse map into the source image.
      const double x = static_cast<double>(col) - cx;
      const double y = cy - static_cast<double>(r);
      const double sx = x * c + y * s;
      const double sy = -x * s + y * c;
      const double src_col = sx + cx;
      const double src_row = cy - sy;

      const double fc = std::floor(src_col);
      const double fr = std::floor(src_row);
      const double wc = src_col - fc;
      const double wr = src_row - fr;
      double acc = 0.0;
      for (int dr = 0; dr <= 1; ++dr) {
        for (int dc = 0; dc <= 1; ++dc) {
          const long rr = static_cast<long>(fr) + dr;
          const long cc = static_cast<long>(fc) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<long>(img.h) ||
              cc >= static_cast<long>(img.w)) {
            continue;  // zero padding
          }
          const double weight = (dr == 0 ? 1.0 - wr : wr) * (dc == 0 ? 1.0 - wc : wc);
          acc += weight * static_cast<double>(img.in[rr * img.w + cc]);
        }
      }
      img.out[r * img.w + col] = static_cast<float>(clamp01(acc));
    }
  }
}

void corrupt_translate(ImageView img, double s) {
  const long shift = static_cast<long>(std::trunc(s));
  for (std::size_t r = 0; r < img.h; ++r) {
    for (std::size_t c = 0; c < img.w; ++c) {
      const long sr = static_cast<long>(r) - shift;
      const long sc = static_cast<long>(c) - shift;
      float v = 0.0f;
      if (sr >= 0 && sc >= 0 && sr < static_cast<long>(img.h) &&
          sc < static_cast<long>(img.w)) {
        v = img.in[sr * img.w + sc];
      }
      img.out[r * img.w + c] = v;
    }
  }
}

void corrupt_pixelate(ImageView img, double s) {
  const std::size_t k = static_cast<std::size_t>(std::lround(s));
  for (std::size_t by = 0; by < img.h; by += k) {
    for (std::size_t bx = 0; bx < img.w; bx += k) {
      const std::size_t ye = std::min(by + k, img.h);
      const std::size_t xe = std::min(bx + k, img.w);
      double acc = 0.0;
      for (std::size_t y = by; y < ye; ++y) {
        for (std::size_t x = bx; x < xe; ++x) {
          acc += static_cast<double>(img.in[y * img.w + x]);
        }
      }
      const float mean = static_cast<float>(
          acc / static_cast<double>((ye - by) * (xe - bx)));
      for (std::size_t y = by; y < ye; ++y) {
        for (std::size_t x = bx; x < xe; ++x) {
          img.out[y * img.w + x] = mean;
        }
      }
    }
  }
}

void check_severity(CorruptionKind kind, double s) {
  switch (kind) {
    case CorruptionKind::kGaussianNoise:
      if (s < 0.0) throw DomainError("gaussian_noise: severity must be >= 0");
      break;
    case CorruptionKind::kShotNoise:
      if (s < 1.0 || s > 512.0)
        throw DomainError("shot_noise: severity must be in [1, 512]");
      break;
    case CorruptionKind::kImpulseNoise:
      if (s < 0.0 || s > 1.0)
        throw DomainError("impulse_noise: severity must be in [0, 1]");
      break;
    case CorruptionKind::kBrightness:
      if (s < -1.0 || s > 1.0)
        throw DomainError("brightness: severity must be in [-1, 1]");
      break;
    case CorruptionKind::kContrast:
      if (s < 0.0) throw DomainError("contrast: severity must be >= 0");
      break;
    case CorruptionKind::kRotate:
      break;  // any angle
    case CorruptionKind::kTranslate:
      break;  // any shift; pixels falling outside become zero
    case CorruptionKind::kPixelate:
      if (s < 1.0) throw DomainError("pixelate: severity must be >= 1");
      break;
  }
}

}  // namespace

std::string corruption_name(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kGaussianNoise: return "gaussian_noise";
    case CorruptionKind::kShotNoise: return "shot_noise";
    case CorruptionKind::kImpulseNoise: return "impulse_noise";
    case CorruptionKind::kBrightness: return "brightness";
    case CorruptionKind::kContrast: return "contrast";
    case CorruptionKind::kRotate: return "rotate";
    case CorruptionKind::kTranslate: return "translate";
    case CorruptionKind::kPixelate: return "pixelate";
  }
  throw DomainError("unknown corruption kind");
}

CorruptionKind corruption_from_name(std::string_view name) {
  for (CorruptionKind kind : all_corruption_kinds()) {
    if (corruption_name(kind) == name) {
      return kind;
    }
  }
  throw ConfigError("unknown corruption kind: " + std::string(name));
}

std::vector<CorruptionKind> all_corruption_kinds() {
  return {CorruptionKind::kGaussianNoise, CorruptionKind::kShotNoise,
          CorruptionKind::kImpulseNoise,  CorruptionKind::kBrightness,
          CorruptionKind::kContrast,      CorruptionKind::kRotate,
          CorruptionKind::kTranslate,     CorruptionKind::kPixelate};
}

double identity_severity(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::kShotNoise:
    case CorruptionKind::kContrast:
    case CorruptionKind::kPixelate:
      return 1.0;
    default:
      return 0.0;
  }
}

std::vector<CorruptionSpec> default_corruption_suite() {
  return {{CorruptionKind::kGaussianNoise, 0.2},
          {CorruptionKind::kShotNoise, 3.0},
          {CorruptionKind::kImpulseNoise, 0.1},
          {CorruptionKind::kBrightness, 0.4},
          {CorruptionKind::kContrast, 0.3},
          {CorruptionKind::kRotate, 25.0},
          {CorruptionKind::kTranslate, 4.0},
          {CorruptionKind::kPixelate, 2.0}};
}

Dataset apply_corruption(const Dataset& dataset, CorruptionKind kind,
                         double severity, SeededRng& rng) {
  if (dataset.size() == 0) {
    throw DomainError("apply_corruption: dataset is empty");
  }
  check_severity(kind, severity);

  Dataset out;
  out.labels = dataset.labels;
  out.name = dataset.name + "_" + corruption_name(kind) + "_" +
             severity_label(severity);
  out.images = Tensor(dataset.images.shape());

  const auto& shape = dataset.images.shape();
  const std::size_t h = shape[1], w = shape[2];
  const std::size_t per = h * w;

  // shot_noise severity 1 is the designated identity even though the
  // sampler itself is at its noisiest there; pass the input through.
  if (kind == CorruptionKind::kShotNoise && severity == 1.0) {
    out.images = dataset.images;
    return out;
  }

  const std::uint64_t base_seed = rng.next_u64();
  parallel_for(dataset.size(), [&](std::size_t i) {
    ImageView img{dataset.images.data() + i * per,
                  out.images.data() + i * per, h, w};
    SeededRng child(base_seed + i);
    switch (kind) {
      case CorruptionKind::kGaussianNoise: corrupt_gaussian(img, severity, child); break;
      case CorruptionKind::kShotNoise: corrupt_shot(img, severity, child); break;
      case CorruptionKind::kImpulseNoise: corrupt_impulse(img, severity, child); break;
      case CorruptionKind::kBrightness: corrupt_brightness(img, severity); break;
      case CorruptionKind::kContrast: corrupt_contrast(img, severity); break;
      case CorruptionKind::kRotate: corrupt_rotate(img, severity); break;
      case CorruptionKind::kTranslate: corrupt_translate(img, severity); break;
      case CorruptionKind::kPixelate: corrupt_pixelate(img, severity); break;
    }
  });
  return out;
}

CorruptionTable corruption_table(
    const NetworkSpec& spec,
    std::span<const std::pair<std::string, const Parameters*>> models,
    const Dataset& dataset, std::span<const CorruptionSpec> kinds,
    SeededRng& rng) {
  if (models.empty()) {
    throw DomainError("corruption_table: no models");
  }
  CorruptionTable table;
  for (const auto& [tag, params] : models) {
    table.model_tags.push_back(tag);
  }

  CorruptionRow baseline;
  baseline.label = "baseline";
  for (const auto& [tag, params] : models) {
    baseline.accuracies.push_back(evaluate_accuracy(spec, *params, dataset));
  }
  table.rows.push_back(std::move(baseline));

  std::vector<double> sums(models.size(), 0.0);
  for (const CorruptionSpec& c : kinds) {
    const Dataset corrupted = apply_corruption(dataset, c.kind, c.severity, rng);
    CorruptionRow row;
    row.label = corruption_name(c.kind);
    row.severity = c.severity;
    row.has_severity = true;
    for (std::size_t m = 0; m < models.size(); ++m) {
      const double acc = evaluate_accuracy(spec, *models[m].second, corrupted);
      row.accuracies.push_back(acc);
      sums[m] += acc;
    }
    table.rows.push_back(std::move(row));
  }

  if (!kinds.empty()) {
    CorruptionRow average;
    average.label = "average";
    for (double sum : sums) {
      average.accuracies.push_back(sum / static_cast<double>(kinds.size()));
    }
    table.rows.push_back(std::move(average));
  }
  return table;
}

void save_corruption_table_csv(const CorruptionTable& table,
                               const std::filesystem::path& path) {
  CsvWriter csv(path, "corruption_table");
  std::vector<std::string> header = {"corruption", "severity"};
  header.insert(header.end(), table.model_tags.begin(), table.model_tags.end());
  if (table.model_tags.size() >= 2) {
    header.push_back("difference");
  }
  csv.header(header);
  for (const CorruptionRow& row : table.rows) {
    std::vector<std::string> cells = {row.label,
                                      row.has_severity
                                          ? CsvWriter::num(row.severity)
                                          : std::string()};
    for (double acc : row.accuracies) {
      cells.push_back(CsvWriter::num(acc));
    }
    if (table.model_tags.size() >= 2) {
      cells.push_back(CsvWriter::num(CorruptionTable::difference(row)));
    }
    csv.row(cells);
  }
}

std::string severity_label(double severity) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", severity);
  return buf;
}

}  // namespace dprl
