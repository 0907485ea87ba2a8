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

#ifndef DPRL_DATASET_HPP_
#define DPRL_DATASET_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "dprl/rng.hpp"
#include "dprl/tensor.hpp"

namespace dprl {

/// Labeled image set. images is {N, H, W} (or {N, D} for flat data) with
/// pixel values in [0, 1]; labels are class indices below the consuming
/// network's class_count.
struct Dataset {
  Tensor images;
  std::vector<std::size_t> labels;
  std::string name;

  std::size_t size() const { return labels.size(); }
  std::size_t sample_count_per_image() const;

  /// Copy of sample i with the leading axis dropped.
  Tensor sample(std::size_t i) const;
  std::size_t label(std::size_t i) const { return labels.at(i); }

  /// Samples [begin, begin + count), count clamped to the end.
  Dataset slice(std::size_t begin, std::size_t count) const;

  /// First n samples (n clamped to size()).
  Dataset head(std::size_t n) const;
};

/// Reads a big-endian IDX image/label pair (magic 0x00000803 with 3 dims /
/// 0x00000801 with 1 dim). Pixel bytes are scaled by 1/255 into [0, 1].
/// Parse errors name the offending field and byte offset.
Dataset load_idx(const std::filesystem::path& images_path,
                 const std::filesystem::path& labels_path);

/// Inverse of load_idx. Pixels are quantized to bytes with round(v * 255),
/// so load(save(d)) == d holds bit-exactly once d has been quantized once.
void save_idx(const Dataset& dataset, const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path);

/// Gaussian class blobs in [0, 1]^dim with centers at pairwise distance
/// >= margin and per-coordinate std blob_std (default margin / 4). dim must
/// be a perfect square for image-shaped output; otherwise samples are flat.
Dataset synthesize_blobs(SeededRng& rng, std::size_t n_per_class,
                         std::size_t classes, std::size_t dim, double margin,
                         double blob_std = 0.0);

/// Deterministic handwriting-style digit set: 10 glyph classes rendered at
/// image_size x image_size with per-sample affine jitter, stroke width and
/// intensity variation, and light pixel noise. Serves as a drop-in stand-in
/// when the real MNIST IDX files are not on disk.
Dataset synthesize_glyphs(SeededRng& rng, std::size_t n_per_class,
                          std::size_t image_size = 28);

}  // namespace dprl

#endif  // DPRL_DATASET_HPP_
