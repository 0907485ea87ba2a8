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

#ifndef DPRL_CHECKPOINT_HPP_
#define DPRL_CHECKPOINT_HPP_

#include <filesystem>
#include <utility>

#include "dprl/network.hpp"

namespace dprl {

/// Model checkpoint container. Layout (all integers little-endian):
///   bytes 0..3   magic "DPRL"
///   u32          format version (currently 1)
///   u32 rank, u32 extent[rank]        input shape
///   u32          class count
///   u32 layer count, then per layer:
///     u8 tag     0 dense (u32 in, u32 out)
///                1 conv2d (u32 kernel, u32 in_channels, u32 out_channels)
///                2 maxpool, 3 relu (no payload)
///   u64          parameter count
///   f32[count]   flat parameters, little-endian
/// Round trips are bit-exact.
void save_checkpoint(const std::filesystem::path& path, const NetworkSpec& spec,
                     const Parameters& params);

std::pair<NetworkSpec, Parameters> load_checkpoint(
    const std::filesystem::path& path);

}  // namespace dprl

#endif  // DPRL_CHECKPOINT_HPP_
