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
#include "meshkit/mesh.h"

#include <span>
#include <vector>

namespace meshkit {

/// One labelled mesh. `colors` is empty or holds one RGB triple per vertex;
/// `vertex_labels` is empty or holds one class per vertex.
struct Sample {
  TriMesh mesh;
  std::vector<Vec3> colors;
  int label = -1;
  std::vector<int> vertex_labels;

  bool textured() const { return !colors.empty(); }
};

/// Several meshes stored as one. Sample s owns vertices
/// [vertex_offsets[s], vertex_offsets[s + 1]) and the matching facet range.
struct HeteroBatch {
  TriMesh mesh;
  std::vector<Vec3> colors;
  std::vector<int> vertex_offsets;  // num_samples + 1
  std::vector<int> facet_offsets;   // num_samples + 1
  std::vector<int> labels;
  std::vector<int> vertex_labels;

  std::size_t num_samples() const {
    return vertex_offsets.empty() ? 0 : vertex_offsets.size() - 1;
  }
  bool textured() const { return !colors.empty(); }
};

/// Throws ArgumentError on an empty list, a sample without vertices, or
/// samples that disagree on colors or per-vertex labels.
HeteroBatch concat_batch(std::span<const Sample> samples);

std::vector<Sample> split_batch(const HeteroBatch& batch);

/// Sample index of every vertex.
std::vector<int> vertex_sample_ids(std::span<const int> vertex_offsets);

struct BatchDecimation {
  TriMesh mesh;
  ClusterMap cluster_map;
  std::vector<int> vertex_offsets;
  std::vector<int> facet_offsets;
  double total_cost = 0.0;
};

/// Decimates every sample on its own to ceil(N_s / stride) vertices and
/// stacks the results; no cluster spans two samples.
BatchDecimation decimate_batch(const TriMesh& mesh,
                               std::span<const int> vertex_offsets,
                               std::span<const int> facet_offsets,
                               double stride);

}  // namespace meshkit
