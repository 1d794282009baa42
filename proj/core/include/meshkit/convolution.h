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

// Mesh and point-cloud convolutions with spherical-harmonic filters.
//
// Every kernel comes in two layers: a "planned" form that takes precomputed
// basis matrices (reused across layers sharing the same geometry) and a
// convenience form that takes raw geometry plus a HarmonicFilter. Backward
// passes return gradients for the features and the filter coefficients;
// geometry (normals, angles, radii) is treated as constant data.
//
// All kernels parallelize over output rows and accumulate each row in a fixed
// index order, so results are independent of the thread count.

#pragma once

#include "meshkit/harmonics.h"
#include "meshkit/mesh.h"

#include <cstdint>
#include <span>
#include <vector>

namespace meshkit {

/// Gradients of a depth-wise filtered convolution.
struct ConvGrads {
  Matrix input;              // same shape as the input features
  Matrix coefficients;       // T x C (or 3T x C_out for facet2facet)
  RowVector radial_constant; // point convolution only
};

// -- facet2vertex ------------------------------------------------------------

/// Basis rows evaluated at the spherical angles of each facet normal (M x T).
Matrix normal_basis(int degree, std::span<const Vec3> normals);

/// g_v = 1/|N(v)| sum_{f in N(v)} F(n_f) * h_f, channel-wise. Vertices without
/// incident facets receive zeros.
Matrix facet2vertex(const VertexFacetAdjacency& adj, const Matrix& facet_basis,
                    const Matrix& facet_features, const Matrix& coefficients);
ConvGrads facet2vertex_backward(const VertexFacetAdjacency& adj,
                                std::span<const Facet> facets,
                                const Matrix& facet_basis,
                                const Matrix& facet_features,
                                const Matrix& coefficients,
                                const Matrix& upstream);

Matrix facet2vertex(const TriMesh& mesh, const Matrix& facet_features,
                    const HarmonicFilter& filter);

// -- vertex2facet ------------------------------------------------------------

/// Basis rows at the three corner anchors (pi/2, 0), (pi/2, pi/2), (0, 0).
Matrix anchor_basis(int degree);

/// g_f = F(pi/2, 0) h_1 + F(pi/2, pi/2) h_2 + F(0, 0) h_3, channel-wise.
Matrix vertex2facet(std::span<const Facet> facets, const Matrix& anchors,
                    const Matrix& vertex_features, const Matrix& coefficients);
ConvGrads vertex2facet_backward(const VertexFacetAdjacency& adj,
                                std::span<const Facet> facets,
                                const Matrix& anchors,
                                const Matrix& vertex_features,
                                const Matrix& coefficients,
                                const Matrix& upstream);

Matrix vertex2facet(std::span<const Facet> facets,
                    const Matrix& vertex_features,
                    const HarmonicFilter& filter);

// -- vertex2vertex -----------------------------------------------------------

struct Vertex2VertexResult {
  Matrix vertex_features;
  Matrix facet_features;  // intermediate vertex2facet output
};

Vertex2VertexResult vertex2vertex(const TriMesh& mesh,
                                  const Matrix& vertex_features,
                                  const HarmonicFilter& to_facet,
                                  const HarmonicFilter& to_vertex);

// -- facet2facet -------------------------------------------------------------

/// Basis rows at barycentric_to_angles of every texture sample (S x T).
Matrix texture_basis(int degree, const TextureField& texture);

/// Full (not depth-wise) filtering of facet colors. `kernel` has 3T rows,
/// row t * 3 + i holding the coefficient of basis t for color channel i,
/// and C_out columns. g_f[c] = 1/K sum_k <F_c(xi_k), h_k>. Facets without
/// samples produce zeros and are flagged in `empty` when given.
Matrix facet2facet(const TextureField& texture, const Matrix& sample_basis,
                   const Matrix& kernel,
                   std::vector<std::uint8_t>* empty = nullptr);
/// `input` of the result holds gradients per color sample (S x 3).
ConvGrads facet2facet_backward(const TextureField& texture,
                               const Matrix& sample_basis,
                               const Matrix& kernel, const Matrix& upstream);

/// Texture colors packed as an S x 3 matrix.
Matrix texture_colors(const TextureField& texture);

// -- point cloud -------------------------------------------------------------

/// Neighbors of each query within a radius, in CSR form with ascending point
/// index per query.
struct NeighborList {
  std::vector<int> offsets;  // num_queries + 1
  std::vector<int> indices;
  std::vector<Vec3> displacements;  // point - query
  std::vector<double> distances;

  std::size_t num_queries() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  std::size_t num_pairs() const { return indices.size(); }
};

/// All (query, point) pairs with |point - query|^2 <= radius^2, found through
/// a uniform grid of cell size `radius`.
NeighborList radius_search(std::span<const Vec3> points,
                           std::span<const Vec3> queries, double radius);

/// Per-pair filter inputs: basis rows at the displacement direction and
/// z = r / radius. Pairs at r = 0 get a zero basis row and z = 0.
struct PointPairGeometry {
  Matrix basis;           // pairs x T
  std::vector<double> z;  // pairs
  double radius = 1.0;
};

PointPairGeometry point_pair_geometry(const NeighborList& neighbors,
                                      int degree, double radius);

/// g_q = 1/|N(q)| sum_p F(theta, phi, r) * h_p with
/// F(theta, phi, r) = z F(theta, phi) + (1 - z) c0. Queries without
/// neighbors produce zeros and are flagged in `empty` when given.
Matrix pcloud_conv(const NeighborList& neighbors,
                   const PointPairGeometry& geometry,
                   const Matrix& point_features, const Matrix& coefficients,
                   const RowVector& radial_constant,
                   std::vector<std::uint8_t>* empty = nullptr);
ConvGrads pcloud_conv_backward(const NeighborList& neighbors,
                               const PointPairGeometry& geometry,
                               const Matrix& point_features,
                               const Matrix& coefficients,
                               const RowVector& radial_constant,
                               const Matrix& upstream);

Matrix pcloud_conv(const NeighborList& neighbors, const Matrix& point_features,
                   const HarmonicFilter& filter);

}  // namespace meshkit
