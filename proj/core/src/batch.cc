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


#include "meshkit/batch.h"

#include "meshkit/decimation.h"

#include <algorithm>

namespace meshkit {

namespace {

void check_offsets(std::span<const int> offsets, std::size_t total,
                   const char* what) {
  if (offsets.size() < 2 || offsets.front() != 0 ||
      static_cast<std::size_t>(offsets.back()) != total) {
    throw ArgumentError(std::string("batch: malformed ") + what + " offsets");
  }
  for (std::size_t s = 1; s < offsets.size(); ++s) {
    if (offsets[s] < offsets[s - 1]) {
      throw ArgumentError(std::string("batch: decreasing ") + what + " offsets");
    }
  }
}

}  // namespace

HeteroBatch concat_batch(std::span<const Sample> samples) {
  if (samples.empty()) throw ArgumentError("concat_batch: no samples");
  const bool textured = samples.front().textured();
  const bool dense = !samples.front().vertex_labels.empty();
  HeteroBatch batch;
  batch.vertex_offsets.push_back(0);
  batch.facet_offsets.push_back(0);
  for (const Sample& s : samples) {
    const std::size_t n = s.mesh.num_vertices();
    if (n == 0) throw ArgumentError("concat_batch: sample without vertices");
    if (s.textured() != textured || s.vertex_labels.empty() == dense) {
      throw ArgumentError("concat_batch: inconsistent feature schema");
    }
    if (textured && s.colors.size() != n) {
      throw ArgumentError("concat_batch: color rows must match vertices");
    }
    if (dense && s.vertex_labels.size() != n) {
      throw ArgumentError("concat_batch: label rows must match vertices");
    }
    check_indices(s.mesh);
    const int base = batch.vertex_offsets.back();
    batch.mesh.vertices.insert(batch.mesh.vertices.end(),
                               s.mesh.vertices.begin(), s.mesh.vertices.end());
    for (const Facet& f : s.mesh.facets) {
      batch.mesh.facets.push_back({f[0] + base, f[1] + base, f[2] + base});
    }
    batch.colors.insert(batch.colors.end(), s.colors.begin(), s.colors.end());
    batch.vertex_labels.insert(batch.vertex_labels.end(),
                               s.vertex_labels.begin(), s.vertex_labels.end());
    batch.labels.push_back(s.label);
    batch.vertex_offsets.push_back(base + static_cast<int>(n));
    batch.facet_offsets.push_back(batch.facet_offsets.back() +
                                  static_cast<int>(s.mesh.num_facets()));
  }
  return batch;
}

std::vector<Sample> split_batch(const HeteroBatch& batch) {
  check_offsets(batch.vertex_offsets, batch.mesh.num_vertices(), "vertex");
  check_offsets(batch.facet_offsets, batch.mesh.num_facets(), "facet");
  if (batch.facet_offsets.size() != batch.vertex_offsets.size() ||
      batch.labels.size() != batch.num_samples()) {
    throw ArgumentError("split_batch: offset tables disagree");
  }
  std::vector<Sample> out(batch.num_samples());
  for (std::size_t s = 0; s < out.size(); ++s) {
    const int v0 = batch.vertex_offsets[s];
    const int v1 = batch.vertex_offsets[s + 1];
    Sample& sample = out[s];
    sample.mesh.vertices.assign(batch.mesh.vertices.begin() + v0,
                                batch.mesh.vertices.begin() + v1);
    for (int f = batch.facet_offsets[s]; f < batch.facet_offsets[s + 1]; ++f) {
      const Facet& g = batch.mesh.facets[static_cast<std::size_t>(f)];
      for (int k = 0; k < 3; ++k) {
        if (g[k] < v0 || g[k] >= v1) {
          throw StructuralError("split_batch: facet crosses a sample boundary");
        }
      }
      sample.mesh.facets.push_back({g[0] - v0, g[1] - v0, g[2] - v0});
    }
    if (batch.textured()) {
      sample.colors.assign(batch.colors.begin() + v0, batch.colors.begin() + v1);
    }
    if (!batch.vertex_labels.empty()) {
      sample.vertex_labels.assign(batch.vertex_labels.begin() + v0,
                                  batch.vertex_labels.begin() + v1);
    }
    sample.label = batch.labels[s];
  }
  return out;
}

std::vector<int> vertex_sample_ids(std::span<const int> vertex_offsets) {
  std::vector<int> ids;
  if (vertex_offsets.empty()) return ids;
  ids.reserve(static_cast<std::size_t>(vertex_offsets.back()));
  for (std::size_t s = 0; s + 1 < vertex_offsets.size(); ++s) {
    ids.insert(ids.end(),
               static_cast<std::size_t>(vertex_offsets[s + 1] - vertex_offsets[s]),
               static_cast<int>(s));
  }
  return ids;
}

BatchDecimation decimate_batch(const TriMesh& mesh,
                               std::span<const int> vertex_offsets,
                               std::span<const int> facet_offsets,
                               double stride) {
  check_offsets(vertex_offsets, mesh.num_vertices(), "vertex");
  check_offsets(facet_offsets, mesh.num_facets(), "facet");
  if (vertex_offsets.size() != facet_offsets.size()) {
    throw ArgumentError("decimate_batch: offset tables disagree");
  }
  BatchDecimation out;
  out.vertex_offsets.push_back(0);
  out.facet_offsets.push_back(0);
  out.cluster_map.vcluster.reserve(mesh.num_vertices());
  out.cluster_map.iomap.reserve(mesh.num_vertices());
  for (std::size_t s = 0; s + 1 < vertex_offsets.size(); ++s) {
    const int v0 = vertex_offsets[s];
    TriMesh part;
    part.vertices.assign(mesh.vertices.begin() + v0,
                         mesh.vertices.begin() + vertex_offsets[s + 1]);
    for (int f = facet_offsets[s]; f < facet_offsets[s + 1]; ++f) {
      const Facet& g = mesh.facets[static_cast<std::size_t>(f)];
      part.facets.push_back({g[0] - v0, g[1] - v0, g[2] - v0});
    }
    check_indices(part);
    const int target = stride_target(part.num_vertices(), stride);
    DecimationResult r = decimate(part, target);
    const int base = out.cluster_map.num_output;
    for (int c : r.cluster_map.vcluster) out.cluster_map.vcluster.push_back(c + base);
    for (int c : r.cluster_map.iomap) out.cluster_map.iomap.push_back(c + base);
    out.cluster_map.num_output += r.cluster_map.num_output;
    out.mesh.vertices.insert(out.mesh.vertices.end(), r.mesh.vertices.begin(),
                             r.mesh.vertices.end());
    for (const Facet& g : r.mesh.facets) {
      out.mesh.facets.push_back({g[0] + base, g[1] + base, g[2] + base});
    }
    out.vertex_offsets.push_back(out.cluster_map.num_output);
    out.facet_offsets.push_back(static_cast<int>(out.mesh.facets.size()));
    out.total_cost += r.total_cost;
  }
  return out;
}

}  // namespace meshkit
