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

#ifndef DPRL_RNG_HPP_
#define DPRL_RNG_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace dprl {

/// Seeded xoshiro256** generator. Identical seeds produce identical output
/// streams bit-for-bit on every platform; all randomness in the library goes
/// through this type. Single-owner: parallel code derives independent
/// sub-streams with spawn() instead of sharing one instance.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit();

  /// Uniform integer in [0, n). Unbiased (rejection sampling). n must be > 0.
  std::uint64_t next_below(std::uint64_t n);

  /// Child generator seeded from the next draw of this stream.
  SeededRng spawn();

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

/// Seeded Fisher-Yates permutation of {0, ..., n-1}.
std::vector<std::size_t> shuffled_indices(std::size_t n, SeededRng& rng);

}  // namespace dprl

#endif  // DPRL_RNG_HPP_
