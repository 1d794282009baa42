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

#include "meshkit/common.h"

#include <span>
#include <vector>

namespace meshkit {

/// Links a mesh to its decimated successor.
///
/// `vcluster[i]` is the cluster id of input vertex i (ids are contiguous and
/// numbered in creation order); `iomap[i]` is the index of the output vertex
/// that vertex i is contracted to. Both induce the same partition.
struct ClusterMap {
  std::vector<int> vcluster;
  std::vector<int> iomap;
  int num_output = 0;

  std::size_t num_input() const { return iomap.size(); }
};

ClusterMap identity_cluster_map(std::size_t num_vertices);

/// Throws StructuralError unless both vectors have equal length, ids are
/// contiguous in [0, num_output) and the two vectors induce one partition.
void check_cluster_map(const ClusterMap& map);

/// Maps original vertices through `first` and then `second`.
ClusterMap compose(const ClusterMap& first, const ClusterMap& second);

/// CSR view of clusters indexed by output vertex; members ascend.
struct ClusterMembers {
  std::vector<int> offsets;  // num_output + 1
  std::vector<int> members;

  std::span<const int> of(int cluster) const {
    return {members.data() + offsets[cluster],
            static_cast<std::size_t>(offsets[cluster + 1] - offsets[cluster])};
  }
};

ClusterMembers cluster_members(const ClusterMap& map);

/// Arithmetic mean of each cluster's positions, indexed by output vertex.
std::vector<Vec3> cluster_centroids(std::span<const Vec3> positions,
                                    const ClusterMap& map);

}  // namespace meshkit
