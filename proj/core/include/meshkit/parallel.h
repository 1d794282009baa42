// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>

namespace meshkit {

/// Caps the worker count used by data-parallel kernels. 1 gives the
/// sequential reference mode.
void set_num_threads(int threads);
int num_threads();

/// Reads MESHKIT_THREADS; returns 0 when unset or invalid.
int threads_from_environment();

/// Runs body(i) for i in [0, n). Iterations must write disjoint outputs;
/// every output element is produced by exactly one iteration, so results
/// do not depend on the thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (count >= 512)
  for (std::int64_t i = 0; i < count; ++i) {
    body(static_cast<std::size_t>(i));
  }
}

}  // namespace meshkit
