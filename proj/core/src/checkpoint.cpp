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

#include "dprl/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "dprl/errors.hpp"

namespace dprl {
namespace {

constexpr char kMagic[4] = {'D', 'P', 'R', 'L'};
constexpr std::uint32_t kVersion = 1;

enum LayerTag : std::uint8_t { kDense = 0, kConv2d = 1, kMaxPool = 2, kRelu = 3 };

void put_u32(std::vector<char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void put_u64(std::vector<char>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

void put_f32(std::vector<char>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

class Reader {
 public:
  Reader(std::vector<char> bytes, std::string path)
      : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::size_t offset() const { return offset_; }

  std::uint8_t u8(const char* field) {
    need(1, field);
    return static_cast<std::uint8_t>(bytes_[offset_++]);
  }

  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[offset_ + i]))
           << (8 * i);
    }
    offset_ += 4;
    return v;
  }

  std::uint64_t u64(const char* field) {
    need(8, field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[offset_ + i]))
           << (8 * i);
    }
    offset_ += 8;
    return v;
  }

  float f32(const char* field) {
    const std::uint32_t bits = u32(field);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }

  [[noreturn]] void fail(const char* field, const std::string& detail) const {
    throw ParseError(path_ + ": " + field + " at byte " + std::to_string(offset_) +
                     ": " + detail);
  }

 private:
  void need(std::size_t n, const char* field) const {
    if (offset_ + n > bytes_.size()) {
      throw ParseError(path_ + ": truncated while reading " + field +
                       " at byte " + std::to_string(offset_));
    }
  }

  std::vector<char> bytes_;
  std::string path_;
  std::size_t offset_ = 0;
};

std::vector<char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return std::vector<char>(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const NetworkSpec& spec,
                     const Parameters& params) {
  validate(spec);
  if (params.size() != parameter_count(spec)) {
    throw DimensionError("save_checkpoint: parameter count mismatch");
  }

  std::vector<char> out;
  out.reserve(64 + 4 * params.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(spec.input_shape.size()));
  for (std::size_t extent : spec.input_shape) {
    put_u32(out, static_cast<std::uint32_t>(extent));
  }
  put_u32(out, static_cast<std::uint32_t>(spec.class_count));
  put_u32(out, static_cast<std::uint32_t>(spec.layers.size()));
  for (const LayerSpec& layer : spec.layers) {
    if (const auto* d = std::get_if<DenseSpec>(&layer)) {
      out.push_back(kDense);
      put_u32(out, static_cast<std::uint32_t>(d->in));
      put_u32(out, static_cast<std::uint32_t>(d->out));
    } else if (const auto* c = std::get_if<Conv2dSpec>(&layer)) {
      out.push_back(kConv2d);
      put_u32(out, static_cast<std::uint32_t>(c->kernel));
      put_u32(out, static_cast<std::uint32_t>(c->in_channels));
      put_u32(out, static_cast<std::uint32_t>(c->out_channels));
    } else if (std::holds_alternative<MaxPoolSpec>(layer)) {
      out.push_back(kMaxPool);
    } else {
      out.push_back(kRelu);
    }
  }
  put_u64(out, params.size());
  for (float v : params.flat()) {
    put_f32(out, v);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw IoError("cannot write " + path.string());
  }
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) {
    throw IoError("write failed: " + path.string());
  }
}

std::pair<NetworkSpec, Parameters> load_checkpoint(
    const std::filesystem::path& path) {
  Reader r(read_all(path), path.string());

  char magic[4];
  for (char& ch : magic) {
    ch = static_cast<char>(r.u8("magic"));
  }
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError(path.string() + ": unexpected magic at byte 0");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw ParseError(path.string() + ": unsupported format version " +
                     std::to_string(version));
  }

  NetworkSpec spec;
  const std::uint32_t rank = r.u32("input rank");
  if (rank == 0 || rank > 8) {
    r.fail("input rank", "out of range");
  }
  for (std::uint32_t i = 0; i < rank; ++i) {
    spec.input_shape.push_back(r.u32("input extent"));
  }
  spec.class_count = r.u32("class count");
  const std::uint32_t layer_count = r.u32("layer count");
  for (std::uint32_t i = 0; i < layer_count; ++i) {
    const std::uint8_t tag = r.u8("layer tag");
    switch (tag) {
      case kDense: {
        DenseSpec d;
        d.in = r.u32("dense in");
        d.out = r.u32("dense out");
        spec.layers.push_back(d);
        break;
      }
      case kConv2d: {
        Conv2dSpec c;
        c.kernel = r.u32("conv kernel");
        c.in_channels = r.u32("conv in_channels");
        c.out_channels = r.u32("conv out_channels");
        spec.layers.push_back(c);
        break;
      }
      case kMaxPool:
        spec.layers.push_back(MaxPoolSpec{});
        break;
      case kRelu:
        spec.layers.push_back(ReluSpec{});
        break;
      default:
        r.fail("layer tag", "unknown tag " + std::to_string(tag));
    }
  }
  validate(spec);

  const std::uint64_t count = r.u64("parameter count");
  if (count != parameter_count(spec)) {
    r.fail("parameter count",
           "file says " + std::to_string(count) + ", topology needs " +
               std::to_string(parameter_count(spec)));
  }
  Parameters params(spec);
  auto flat = params.flat();
  for (std::uint64_t i = 0; i < count; ++i) {
    flat[i] = r.f32("parameters");
  }
  return {std::move(spec), std::move(params)};
}

}  // namespace dprl
