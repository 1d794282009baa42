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

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace meshkit {

/// Vertex positions plus 0-based triangle index triples. Winding defines the
/// facet normal orientation.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<Facet> facets;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_facets() const { return facets.size(); }
};

/// Incident facets of every vertex in CSR form; facet ids ascend per vertex
/// and `corners` records which corner (0, 1, 2) of the facet the vertex is.
struct VertexFacetAdjacency {
  std::vector<int> offsets;  // num_vertices + 1
  std::vector<int> facets;
  std::vector<std::uint8_t> corners;

  static VertexFacetAdjacency build(std::size_t num_vertices,
                                    std::span<const Facet> facets);

  std::size_t num_vertices() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  int degree(std::size_t v) const { return offsets[v + 1] - offsets[v]; }
};

/// Facets with area below this are treated as degenerate.
inline constexpr double kDegenerateArea = 1e-12;

/// Throws StructuralError when any facet index is outside [0, N).
void check_indices(const TriMesh& mesh);

struct NormalsAreas {
  std::vector<Vec3> normals;
  std::vector<double> areas;
  std::vector<std::uint8_t> degenerate;
};

/// Unit normals from cross(x2 - x1, x3 - x1) and areas. Degenerate facets get
/// the normal (0, 0, 1) and are flagged.
NormalsAreas compute_normals_areas(const TriMesh& mesh);

/// Number of columns produced by compute_facet_geometrics.
inline int geometric_feature_count(bool with_height) {
  return with_height ? 12 : 9;
}

struct FacetGeometrics {
  Matrix features;  // M x 9 or M x 12: [edge lengths, angle cosines, normal(, heights)]
  std::vector<std::uint8_t> degenerate;
};

/// Per-facet [l1 l2 l3, c1 c2 c3, nx ny nz (, z1 z2 z3)] with
/// l1 = |x2 - x1|, l2 = |x3 - x2|, l3 = |x1 - x3| and ci the cosine of the
/// inner angle at vertex i. Facets with a zero-length edge get zero cosines
/// and are flagged.
FacetGeometrics compute_facet_geometrics(const TriMesh& mesh,
                                         bool with_height = false);

struct ValidationReport {
  std::vector<std::size_t> out_of_range_facets;
  std::vector<std::size_t> repeated_index_facets;
  /// (first occurrence, duplicate) pairs of facets over the same vertex set.
  std::vector<std::pair<std::size_t, std::size_t>> duplicate_facets;
  /// Edges shared by more than two facets, as (min, max) vertex pairs.
  std::vector<std::pair<int, int>> non_manifold_edges;
  std::vector<int> isolated_vertices;

  bool structurally_valid() const {
    return out_of_range_facets.empty() && repeated_index_facets.empty();
  }
  bool edge_manifold() const { return non_manifold_edges.empty(); }
  bool clean() const {
    return structurally_valid() && duplicate_facets.empty() &&
           edge_manifold() && isolated_vertices.empty();
  }
};

ValidationReport validate_mesh(const TriMesh& mesh);

/// Clusters vertices sharing a cubic cell of edge `grid_size`, with the grid
/// anchored at the bounding-box minimum. Clusters are numbered by their
/// smallest member index.
ClusterMap voxel_cluster(const TriMesh& mesh, double grid_size);

struct TextureResolution {
  int gamma = 0;
  int count = 1;  // (gamma + 1)(gamma + 2) / 2
};

/// Lattice order from facet area: floor(alpha (A - Amin) / (Amax - Amin)) +
/// beta. When Amax == Amin the order is beta.
TextureResolution texture_resolution(double area, double area_min,
                                     double area_max, int alpha, int beta);

/// Uniform barycentric lattice (i, j, gamma - i - j) / gamma; gamma = 0 yields
/// the centroid.
std::vector<Vec3> barycentric_lattice(int gamma);

/// Per-facet color samples at barycentric lattice points.
struct TextureField {
  std::vector<Vec3> colors;        // values in [0, 1]
  std::vector<Vec3> barycentric;   // one triple per color sample
  std::vector<std::size_t> offsets;  // num_facets + 1

  std::size_t num_facets() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  std::size_t samples_of(std::size_t facet) const {
    return offsets[facet + 1] - offsets[facet];
  }
};

/// Interpolates per-vertex colors onto each facet's lattice, sizing every
/// lattice with texture_resolution over the mesh's facet area range.
TextureField sample_texture(const TriMesh& mesh,
                            std::span<const Vec3> vertex_colors, int alpha,
                            int beta);

}  // namespace meshkit
