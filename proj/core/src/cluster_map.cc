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

#include "meshkit/cluster_map.h"

#include <numeric>

namespace meshkit {

ClusterMap identity_cluster_map(std::size_t num_vertices) {
  ClusterMap map;
  map.vcluster.resize(num_vertices);
  std::iota(map.vcluster.begin(), map.vcluster.end(), 0);
  map.iomap = map.vcluster;
  map.num_output = static_cast<int>(num_vertices);
  return map;
}

void check_cluster_map(const ClusterMap& map) {
  if (map.vcluster.size() != map.iomap.size()) {
    throw StructuralError("cluster map: VCluster and IOmap lengths differ");
  }
  const int n_out = map.num_output;
  if (n_out < 0 || (n_out == 0 && !map.iomap.empty())) {
    throw StructuralError("cluster map: invalid output count");
  }
  // cluster id -> output index, and output index -> cluster id, must agree.
  std::vector<int> cluster_to_out(map.iomap.size() + 1, -1);
  std::vector<int> out_to_cluster(static_cast<std::size_t>(n_out), -1);
  for (std::size_t i = 0; i < map.iomap.size(); ++i) {
    const int c = map.vcluster[i];
    const int o = map.iomap[i];
    if (o < 0 || o >= n_out) {
      throw StructuralError("cluster map: IOmap entry out of range");
    }
    if (c < 0 || c >= n_out) {
      throw StructuralError("cluster map: VCluster id out of range");
    }
    if (cluster_to_out[c] == -1) cluster_to_out[c] = o;
    if (out_to_cluster[o] == -1) out_to_cluster[o] = c;
    if (cluster_to_out[c] != o || out_to_cluster[o] != c) {
      throw StructuralError("cluster map: VCluster and IOmap disagree");
    }
  }
  for (int o = 0; o < n_out; ++o) {
    if (out_to_cluster[o] == -1) {
      throw StructuralError("cluster map: output indices are not contiguous");
    }
  }
}

ClusterMap compose(const ClusterMap& first, const ClusterMap& second) {
  if (second.num_input() != static_cast<std::size_t>(first.num_output)) {
    throw ArgumentError("compose: map sizes do not chain");
  }
  ClusterMap out;
  out.iomap.resize(first.num_input());
  for (std::size_t i = 0; i < first.num_input(); ++i) {
    out.iomap[i] = second.iomap[first.iomap[i]];
  }
  out.vcluster = out.iomap;
  out.num_output = second.num_output;
  return out;
}

ClusterMembers cluster_members(const ClusterMap& map) {
  ClusterMembers result;
  result.offsets.assign(static_cast<std::size_t>(map.num_output) + 1, 0);
  for (int o : map.iomap) ++result.offsets[o + 1];
  std::partial_sum(result.offsets.begin(), result.offsets.end(),
                   result.offsets.begin());
  result.members.resize(map.iomap.size());
  std::vector<int> cursor(result.offsets.begin(), result.offsets.end() - 1);
  for (std::size_t i = 0; i < map.iomap.size(); ++i) {
    result.members[cursor[map.iomap[i]]++] = static_cast<int>(i);
  }
  return result;
}

std::vector<Vec3> cluster_centroids(std::span<const Vec3> positions,
                                    const ClusterMap& map) {
  if (positions.size() != map.num_input()) {
    throw ArgumentError("cluster_centroids: position count mismatch");
  }
  const ClusterMembers members = cluster_members(map);
  std::vector<Vec3> centroids(static_cast<std::size_t>(map.num_output),
                              Vec3::Zero());
  for (int o = 0; o < map.num_output; ++o) {
    const auto group = members.of(o);
    Vec3 sum = Vec3::Zero();
    for (int i : group) sum += positions[i];
    centroids[o] = sum / static_cast<double>(group.size());
  }
  return centroids;
}

}  // namespace meshkit
