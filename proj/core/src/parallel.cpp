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

#include "dprl/parallel.hpp"

#include <atomic>

#include "dprl/errors.hpp"

namespace dprl {
namespace {

std::atomic<int> g_max_threads{0};  // 0: use hardware concurrency

}  // namespace

void set_max_threads(int n) {
  if (n < 1) {
    throw DomainError("set_max_threads: thread count must be >= 1");
  }
  g_max_threads.store(n);
}

int max_threads() {
  const int configured = g_max_threads.load();
  if (configured > 0) {
    return configured;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace dprl
