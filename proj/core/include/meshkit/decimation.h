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

// Single-pass quadric-error decimation.
//
// Each iteration sorts the mesh edges once by the quadric cost of contracting
// them to their midpoint, greedily grows disjoint vertex clusters in that
// order, and contracts every cluster to its average position. Iterations are
// chained until the requested vertex count is reached.

#pragma once

#include "meshkit/cluster_map.h"
#include "meshkit/mesh.h"

#include <array>
#include <span>
#include <vector>

namespace meshkit {

/// Symmetric 4x4 quadric stored as its upper triangle
/// (q00 q01 q02 q03 q11 q12 q13 q22 q23 q33).
struct VertexQuadric {
  std::array<double, 10> q{};

  /// w * p p^T for the plane p = (n, d) with n.x + d = 0.
  static VertexQuadric from_plane(const Vec3& normal, double offset,
                                  double weight);

  VertexQuadric& operator+=(const VertexQuadric& other);
  friend VertexQuadric operator+(VertexQuadric a, const VertexQuadric& b) {
    return a += b;
  }

  /// [x 1] Q [x 1]^T.
  double evaluate(const Vec3& x) const;
  Eigen::Matrix4d matrix() const;
};

/// Area-weighted plane quadrics summed over each vertex's incident facets.
/// Degenerate facets contribute nothing.
std::vector<VertexQuadric> vertex_quadrics(const TriMesh& mesh);

/// Undirected mesh edges as (min, max) pairs in ascending order.
std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh);

struct VertexPair {
  int first = 0;   // smaller vertex index
  int second = 0;  // larger vertex index
  double cost = 0.0;
};

/// Cost of contracting a vertex group to the given position.
double contraction_cost(std::span<const VertexQuadric> quadrics,
                        std::span<const int> members, const Vec3& position);

/// One pair per mesh edge, costed at the midpoint under Q_i + Q_j and sorted
/// by (cost, first, second).
std::vector<VertexPair> sorted_pairs(const TriMesh& mesh,
                                     std::span<const VertexQuadric> quadrics);

/// Greedy two-pass clustering over pairs already in the desired order.
///
/// Pass 1 opens a two-vertex cluster for every pair whose endpoints are both
/// unclaimed. Pass 2 attaches a still-unclaimed endpoint to its partner's
/// cluster. Every new cluster and every attachment removes one vertex, and
/// both passes stop once `num_remove` vertices have been removed. Unclaimed
/// vertices end up as singletons. Cluster ids follow creation order; output
/// indices follow the smallest member index.
ClusterMap cluster_vertices(std::span<const VertexPair> pairs, int num_remove,
                            int num_vertices);

/// Moves each cluster to its centroid, remaps facets through the IOmap and
/// drops collapsed facets plus repeated facets over the same vertex set
/// (first occurrence wins).
TriMesh contract_clusters(const TriMesh& mesh, const ClusterMap& map);

/// Sum over clusters of contraction_cost at the cluster centroid.
double clustering_cost(const TriMesh& mesh,
                       std::span<const VertexQuadric> quadrics,
                       const ClusterMap& map);

struct DecimationResult {
  TriMesh mesh;
  ClusterMap cluster_map;  // original vertices -> final vertices
  int removed_count = 0;
  double total_cost = 0.0;  // summed over iterations
  int iterations = 0;
};

/// Iterates quadrics -> sorted_pairs -> cluster_vertices -> contract_clusters
/// until at most `target_vertices` remain, no vertex can be removed, or
/// `max_iters` passes have run.
DecimationResult decimate(const TriMesh& mesh, int target_vertices,
                          int max_iters = 10);

/// ceil(num_vertices / stride), at least 1.
int stride_target(std::size_t num_vertices, double stride);

/// Vertex-clustering alternative: contracts voxel_cluster cells.
DecimationResult decimate_voxel(const TriMesh& mesh, double grid_size);

/// Classic iterative edge collapse with a lazily updated priority queue; the
/// contracted pair is re-costed after every collapse. Used as a runtime
/// baseline.
TriMesh iterative_qem(const TriMesh& mesh, int target_vertices);

}  // namespace meshkit
