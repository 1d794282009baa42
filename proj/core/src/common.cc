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

#include "meshkit/common.h"
#include "meshkit/parallel.h"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <iostream>

namespace meshkit {
namespace {
std::atomic<bool> g_warnings{true};
}  // namespace

void log_warning(const std::string& message) {
  if (g_warnings.load()) std::cerr << "meshkit: warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }
bool warnings_enabled() { return g_warnings.load(); }

void set_num_threads(int threads) {
  if (threads < 1) throw ArgumentError("thread count must be >= 1");
  omp_set_num_threads(threads);
}

int num_threads() { return omp_get_max_threads(); }

int threads_from_environment() {
  const char* value = std::getenv("MESHKIT_THREADS");
  if (value == nullptr) return 0;
  char* end = nullptr;
  const long parsed = std::strtol(value, &end, 10);
  if (end == value || *end != '\0' || parsed < 1 || parsed > 4096) return 0;
  return static_cast<int>(parsed);
}

}  // namespace meshkit
