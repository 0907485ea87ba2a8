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

#include "dprl/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "dprl/errors.hpp"

namespace dprl {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;  // u8 data, 3 dims
constexpr std::uint32_t kLabelMagic = 0x00000801;  // u8 data, 1 dim

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& bytes,
                        std::size_t offset, const char* field,
                        const std::string& path) {
  if (offset + 4 > bytes.size()) {
    throw ParseError(path + ": truncated while reading " + field + " at byte " +
                     std::to_string(offset));
  }
  return (static_cast<std::uint32_t>(bytes[offset]) << 24) |
         (static_cast<std::uint32_t>(bytes[offset + 1]) << 16) |
         (static_cast<std::uint32_t>(bytes[offset + 2]) << 8) |
         static_cast<std::uint32_t>(bytes[offset + 3]);
}

void write_be32(std::ofstream& out, std::uint32_t v) {
  const char buf[4] = {static_cast<char>((v >> 24) & 0xff),
                       static_cast<char>((v >> 16) & 0xff),
                       static_cast<char>((v >> 8) & 0xff),
                       static_cast<char>(v & 0xff)};
  out.write(buf, 4);
}

void check_dataset(const Dataset& d, const char* op) {
  if (d.size() == 0) {
    throw DomainError(std::string(op) + ": dataset is empty");
  }
  if (d.images.rank() != 3 || d.images.shape()[0] != d.size()) {
    throw DimensionError(std::string(op) +
                         ": images must be {N, H, W} with N == label count");
  }
}

// Point-to-segment distance in unit glyph coordinates.
double segment_distance(double px, double py, double ax, double ay, double bx,
                        double by) {
  const double dx = bx - ax;
  const double dy = by - ay;
  const double len_sq = dx * dx + dy * dy;
  double t = 0.0;
  if (len_sq > 0.0) {
    t = ((px - ax) * dx + (py - ay) * dy) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double cx = ax + t * dx;
  const double cy = ay + t * dy;
  return std::sqrt((px - cx) * (px - cx) + (py - cy) * (py - cy));
}

using Stroke = std::vector<std::array<double, 2>>;

// Digit skeletons as polylines in [0, 1]^2 (x right, y down).
const std::vector<std::vector<Stroke>>& glyph_strokes() {
  static const std::vector<std::vector<Stroke>> glyphs = {
      // 0
      {{{0.50, 0.15}, {0.72, 0.28}, {0.75, 0.55}, {0.62, 0.82}, {0.40, 0.85},
        {0.27, 0.70}, {0.25, 0.42}, {0.35, 0.20}, {0.50, 0.15}}},
      // 1
      {{{0.38, 0.30}, {0.54, 0.15}, {0.54, 0.85}},
       {{0.40, 0.85}, {0.68, 0.85}}},
      // 2
      {{{0.28, 0.30}, {0.38, 0.17}, {0.62, 0.15}, {0.74, 0.30}, {0.66, 0.50},
        {0.30, 0.84}, {0.75, 0.84}}},
      // 3
      {{{0.28, 0.20}, {0.60, 0.15}, {0.73, 0.30}, {0.55, 0.47}, {0.74, 0.64},
        {0.60, 0.84}, {0.27, 0.79}}},
      // 4
      {{{0.64, 0.85}, {0.64, 0.15}, {0.26, 0.62}, {0.79, 0.62}}},
      // 5
      {{{0.72, 0.16}, {0.32, 0.16}, {0.29, 0.45}, {0.58, 0.42}, {0.74, 0.58},
        {0.62, 0.83}, {0.27, 0.79}}},
      // 6
      {{{0.64, 0.16}, {0.38, 0.34}, {0.28, 0.60}, {0.38, 0.83}, {0.62, 0.82},
        {0.71, 0.62}, {0.55, 0.47}, {0.31, 0.56}}},
      // 7
      {{{0.26, 0.16}, {0.75, 0.16}, {0.45, 0.85}},
       {{0.38, 0.52}, {0.66, 0.52}}},
      // 8
      {{{0.50, 0.15}, {0.69, 0.28}, {0.50, 0.46}, {0.31, 0.28}, {0.50, 0.15}},
       {{0.50, 0.46}, {0.73, 0.64}, {0.50, 0.85}, {0.27, 0.64}, {0.50, 0.46}}},
      // 9
      {{{0.69, 0.40}, {0.56, 0.20}, {0.34, 0.24}, {0.29, 0.45}, {0.47, 0.55},
        {0.69, 0.40}},
       {{0.69, 0.40}, {0.62, 0.85}}},
  };
  return glyphs;
}

}  // namespace

std::size_t Dataset::sample_count_per_image() const {
  return size() == 0 ? 0 : images.size() / size();
}

Tensor Dataset::sample(std::size_t i) const {
  const auto& s = images.shape();
  std::vector<std::size_t> sample_shape(s.begin() + 1, s.end());
  const std::size_t count = shape_count(sample_shape);
  std::vector<float> values(images.data() + i * count,
                            images.data() + (i + 1) * count);
  return Tensor(std::move(sample_shape), std::move(values));
}

Dataset Dataset::slice(std::size_t begin, std::size_t count) const {
  begin = std::min(begin, size());
  const std::size_t end = std::min(begin + count, size());
  Dataset out;
  const std::size_t per = sample_count_per_image();
  std::vector<std::size_t> shape = images.shape();
  shape[0] = end - begin;
  out.images = Tensor(shape, std::vector<float>(images.data() + begin * per,
                                                images.data() + end * per));
  out.labels.assign(labels.begin() + begin, labels.begin() + end);
  out.name = name;
  return out;
}

Dataset Dataset::head(std::size_t n) const {
  return slice(0, n);
}

Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path) {
  const auto ibytes = read_file(images_path);
  const std::string ipath = images_path.string();
  const std::uint32_t imagic = read_be32(ibytes, 0, "magic", ipath);
  if (imagic != kImageMagic) {
    throw ParseError(ipath + ": unexpected magic at byte 0 (got 0x" +
                     [&] {
                       char buf[16];
                       std::snprintf(buf, sizeof(buf), "%08x", imagic);
                       return std::string(buf);
                     }() +
                     ", want 0x00000803)");
  }
  const std::uint32_t n = read_be32(ibytes, 4, "image count", ipath);
  const std::uint32_t h = read_be32(ibytes, 8, "image height", ipath);
  const std::uint32_t w = read_be32(ibytes, 12, "image width", ipath);
  if (n == 0) {
    throw ParseError(ipath + ": image count at byte 4 is zero");
  }
  const std::size_t pixel_count =
      static_cast<std::size_t>(n) * h * w;
  if (ibytes.size() != 16 + pixel_count) {
    throw ParseError(ipath + ": pixel data at byte 16: expected " +
                     std::to_string(pixel_count) + " bytes, file has " +
                     std::to_string(ibytes.size() - 16));
  }

  const auto lbytes = read_file(labels_path);
  const std::string lpath = labels_path.string();
  const std::uint32_t lmagic = read_be32(lbytes, 0, "magic", lpath);
  if (lmagic != kLabelMagic) {
    throw ParseError(lpath + ": unexpected magic at byte 0 (want 0x00000801)");
  }
  const std::uint32_t ln = read_be32(lbytes, 4, "label count", lpath);
  if (ln != n) {
    throw ParseError(lpath + ": label count at byte 4 is " + std::to_string(ln) +
                     ", image file has " + std::to_string(n));
  }
  if (lbytes.size() != 8 + ln) {
    throw ParseError(lpath + ": label data at byte 8: expected " +
                     std::to_string(ln) + " bytes, file has " +
                     std::to_string(lbytes.size() - 8));
  }

  Dataset out;
  std::vector<float> pixels(pixel_count);
  for (std::size_t i = 0; i < pixel_count; ++i) {
    pixels[i] = static_cast<float>(ibytes[16 + i]) / 255.0f;
  }
  out.images = Tensor({n, h, w}, std::move(pixels));
  out.labels.resize(ln);
  for (std::size_t i = 0; i < ln; ++i) {
    out.labels[i] = lbytes[8 + i];
  }
  out.name = images_path.stem().string();
  return out;
}

void save_idx(const Dataset& dataset, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path) {
  check_dataset(dataset, "save_idx");
  const auto& s = dataset.images.shape();

  std::ofstream iout(images_path, std::ios::binary | std::ios::trunc);
  if (!iout) {
    throw IoError("cannot write " + images_path.string());
  }
  write_be32(iout, kImageMagic);
  write_be32(iout, static_cast<std::uint32_t>(s[0]));
  write_be32(iout, static_cast<std::uint32_t>(s[1]));
  write_be32(iout, static_cast<std::uint32_t>(s[2]));
  std::vector<char> bytes(dataset.images.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const double v = std::clamp(static_cast<double>(dataset.images[i]), 0.0, 1.0);
    bytes[i] = static_cast<char>(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  }
  iout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!iout) {
    throw IoError("write failed: " + images_path.string());
  }

  std::ofstream lout(labels_path, std::ios::binary | std::ios::trunc);
  if (!lout) {
    throw IoError("cannot write " + labels_path.string());
  }
  write_be32(lout, kLabelMagic);
  write_be32(lout, static_cast<std::uint32_t>(dataset.size()));
  for (std::size_t label : dataset.labels) {
    lout.put(static_cast<char>(static_cast<std::uint8_t>(label)));
  }
  if (!lout) {
    throw IoError("write failed: " + labels_path.string());
  }
}

Dataset synthesize_blobs(SeededRng& rng, std::size_t n_per_class,
                         std::size_t classes, std::size_t dim, double margin,
                         double blob_std) {
  if (n_per_class == 0 || classes == 0 || dim == 0) {
    throw DomainError("synthesize_blobs: counts must be positive");
  }
  if (margin <= 0.0) {
    throw DomainError("synthesize_blobs: margin must be > 0");
  }
  if (blob_std < 0.0) {
    throw DomainError("synthesize_blobs: blob std must be >= 0");
  }
  if (blob_std == 0.0) {
    blob_std = margin / 4.0;
  }

  // Rejection-sample class centers in the inner cube until pairwise
  // distances reach the margin.
  std::vector<std::vector<double>> centers;
  centers.reserve(classes);
  for (std::size_t c = 0; c < classes; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      std::vector<double> candidate(dim);
      for (double& v : candidate) {
        v = 0.2 + 0.6 * rng.next_unit();
      }
      placed = true;
      for (const auto& other : centers) {
        double sq = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          sq += (candidate[i] - other[i]) * (candidate[i] - other[i]);
        }
        if (std::sqrt(sq) < margin) {
          placed = false;
          break;
        }
      }
      if (placed) {
        centers.push_back(std::move(candidate));
      }
    }
    if (!placed) {
      throw DomainError("synthesize_blobs: margin unattainable in [0,1]^dim");
    }
  }

  const std::size_t n = n_per_class * classes;
  const std::size_t side = static_cast<std::size_t>(std::lround(std::sqrt(
      static_cast<double>(dim))));
  const bool square = side * side == dim;

  Dataset out;
  std::vector<float> pixels(n * dim);
  out.labels.resize(n);
  // Classes interleaved so that head() keeps the class balance.
  std::size_t row = 0;
  for (std::size_t s = 0; s < n_per_class; ++s) {
    for (std::size_t c = 0; c < classes; ++c, ++row) {
      const Tensor noise = gaussian_sample(rng, dim, blob_std);
      for (std::size_t i = 0; i < dim; ++i) {
        const double v = centers[c][i] + static_cast<double>(noise[i]);
        pixels[row * dim + i] = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
      out.labels[row] = c;
    }
  }
  out.images = square ? Tensor({n, side, side}, std::move(pixels))
                      : Tensor({n, 1, dim}, std::move(pixels));
  out.name = "blobs";
  return out;
}

Dataset synthesize_glyphs(SeededRng& rng, std::size_t n_per_class,
                          std::size_t image_size) {
  if (n_per_class == 0) {
    throw DomainError("synthesize_glyphs: n_per_class must be positive");
  }
  if (image_size < 8) {
    throw DomainError("synthesize_glyphs: image size must be >= 8");
  }
  const auto& glyphs = glyph_strokes();
  const std::size_t classes = glyphs.size();
  const std::size_t n = n_per_class * classes;
  const std::size_t hw = image_size * image_size;

  Dataset out;
  std::vector<float> pixels(n * hw, 0.0f);
  out.labels.resize(n);

  std::size_t row = 0;
  for (std::size_t s = 0; s < n_per_class; ++s) {
    for (std::size_t digit = 0; digit < classes; ++digit, ++row) {
      const double angle = (rng.next_unit() * 2.0 - 1.0) * 0.21;  // ~±12 deg
      const double scale = 0.85 + 0.30 * rng.next_unit();
      const double aspect = 0.92 + 0.16 * rng.next_unit();
      const double shear = (rng.next_unit() * 2.0 - 1.0) * 0.15;
      const double tx = (rng.next_unit() * 2.0 - 1.0) * 0.08;
      const double ty = (rng.next_unit() * 2.0 - 1.0) * 0.08;
      const double width = 0.045 + 0.030 * rng.next_unit();
      const double intensity = 0.75 + 0.25 * rng.next_unit();

      const double ca = std::cos(angle), sa = std::sin(angle);
      auto map_point = [&](double x, double y) {
        double px = (x - 0.5) * scale * aspect;
        double py = (y - 0.5) * scale / aspect;
        px += shear * py;
        const double rx = ca * px - sa * py;
        const double ry = sa * px + ca * py;
        return std::array<double, 2>{rx + 0.5 + tx, ry + 0.5 + ty};
      };

      std::vector<std::array<double, 4>> segments;
      for (const Stroke& stroke : glyphs[digit]) {
        for (std::size_t i = 0; i + 1 < stroke.size(); ++i) {
          const auto a = map_point(stroke[i][0], stroke[i][1]);
          const auto b = map_point(stroke[i + 1][0], stroke[i + 1][1]);
          segments.push_back({a[0], a[1], b[0], b[1]});
        }
      }

      const Tensor noise = gaussian_sample(rng, hw, 0.02);
      float* img = pixels.data() + row * hw;
      for (std::size_t py = 0; py < image_size; ++py) {
        for (std::size_t px = 0; px < image_size; ++px) {
          const double ux = (static_cast<double>(px) + 0.5) /
                            static_cast<double>(image_size);
          const double uy = (static_cast<double>(py) + 0.5) /
                            static_cast<double>(image_size);
          double dist = 1e9;
          for (const auto& seg : segments) {
            dist = std::min(dist, segment_distance(ux, uy, seg[0], seg[1],
                                                   seg[2], seg[3]));
          }
          double v = intensity * std::clamp(1.25 - dist / width, 0.0, 1.0);
          v += static_cast<double>(noise[py * image_size + px]);
          img[py * image_size + px] = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
      }
      out.labels[row] = digit;
    }
  }
  out.images = Tensor({n, image_size, image_size}, std::move(pixels));
  out.name = "glyphs";
  return out;
}

}  // namespace dprl
