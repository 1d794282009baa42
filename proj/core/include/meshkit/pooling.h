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

#include "meshkit/cluster_map.h"
#include "meshkit/common.h"

#include <vector>

namespace meshkit {

enum class PoolMode { kMax, kAverage };

/// Saved forward state of a pool call. In max mode `argmax` holds, for every
/// (output row, channel), the input row that won; ties go to the lowest row.
struct PoolContext {
  ClusterMap cluster_map;
  PoolMode mode = PoolMode::kMax;
  std::vector<int> argmax;  // num_output * channels, row-major
  Eigen::Index channels = 0;
  bool valid = false;
};

/// Channel-wise max or mean over each cluster. Fills `context` when given.
Matrix pool(const Matrix& features, const ClusterMap& map, PoolMode mode,
            PoolContext* context = nullptr);

/// Row i of the result is features[IOmap[i]].
Matrix unpool(const Matrix& features, const ClusterMap& map);

/// Routes the upstream gradient back to the argmax rows (max) or spreads it
/// evenly across cluster members (average). Throws StateError when the
/// context was never filled or does not match `upstream`.
Matrix pool_backward(const PoolContext& context, const Matrix& upstream);

/// Per-cluster sum of upstream rows.
Matrix unpool_backward(const ClusterMap& map, const Matrix& upstream);

}  // namespace meshkit
