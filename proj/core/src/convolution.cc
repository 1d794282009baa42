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

#include "meshkit/convolution.h"

#include "meshkit/parallel.h"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace meshkit {
namespace {

using Eigen::Index;

void require(bool ok, const char* message) {
  if (!ok) throw ArgumentError(message);
}

void check_facets(std::span<const Facet> facets, Index num_vertices) {
  for (const Facet& t : facets) {
    for (int v : t) {
      if (v < 0 || v >= num_vertices) {
        throw StructuralError("facet index out of range");
      }
    }
  }
}

using Cell = std::array<std::int64_t, 3>;

Cell cell_of(const Vec3& p, const Vec3& origin, double size) {
  return {static_cast<std::int64_t>(std::floor((p.x() - origin.x()) / size)),
          static_cast<std::int64_t>(std::floor((p.y() - origin.y()) / size)),
          static_cast<std::int64_t>(std::floor((p.z() - origin.z()) / size))};
}

}  // namespace

// -- facet2vertex ------------------------------------------------------------

Matrix normal_basis(int degree, std::span<const Vec3> normals) {
  std::vector<SphericalAngles> angles(normals.size());
  for (std::size_t f = 0; f < normals.size(); ++f) {
    angles[f] = direction_to_angles(normals[f]);
  }
  return basis_matrix(degree, angles);
}

Matrix facet2vertex(const VertexFacetAdjacency& adj, const Matrix& facet_basis,
                    const Matrix& facet_features,
                    const Matrix& coefficients) {
  require(facet_basis.rows() == facet_features.rows(),
          "facet2vertex: basis and feature row counts differ");
  require(facet_basis.cols() == coefficients.rows(),
          "facet2vertex: coefficient rows must equal basis size");
  require(facet_features.cols() == coefficients.cols(),
          "facet2vertex: channel mismatch between features and filter");
  for (int f : adj.facets) {
    if (f < 0 || f >= facet_features.rows()) {
      throw StructuralError("facet2vertex: adjacency out of range");
    }
  }
  const Matrix weighted =
      (facet_basis * coefficients).cwiseProduct(facet_features);
  const std::size_t n = adj.num_vertices();
  Matrix out = Matrix::Zero(static_cast<Index>(n), facet_features.cols());
  parallel_for(n, [&](std::size_t v) {
    const int begin = adj.offsets[v];
    const int end = adj.offsets[v + 1];
    if (begin == end) return;
    auto row = out.row(static_cast<Index>(v));
    for (int k = begin; k < end; ++k) {
      row += weighted.row(adj.facets[k]);
    }
    row /= static_cast<double>(end - begin);
  });
  return out;
}

ConvGrads facet2vertex_backward(const VertexFacetAdjacency& adj,
                                std::span<const Facet> facets,
                                const Matrix& facet_basis,
                                const Matrix& facet_features,
                                const Matrix& coefficients,
                                const Matrix& upstream) {
  require(upstream.rows() == static_cast<Index>(adj.num_vertices()) &&
              upstream.cols() == facet_features.cols(),
          "facet2vertex_backward: upstream shape mismatch");
  require(static_cast<Index>(facets.size()) == facet_features.rows(),
          "facet2vertex_backward: facet count mismatch");
  const Matrix filter_values = facet_basis * coefficients;
  Matrix d_weighted(facet_features.rows(), facet_features.cols());
  parallel_for(facets.size(), [&](std::size_t f) {
    auto row = d_weighted.row(static_cast<Index>(f));
    row.setZero();
    for (int v : facets[f]) {
      row += upstream.row(v) / static_cast<double>(adj.degree(v));
    }
  });
  ConvGrads g;
  g.input = d_weighted.cwiseProduct(filter_values);
  g.coefficients =
      facet_basis.transpose() * d_weighted.cwiseProduct(facet_features);
  return g;
}

Matrix facet2vertex(const TriMesh& mesh, const Matrix& facet_features,
                    const HarmonicFilter& filter) {
  filter.validate();
  require(facet_features.rows() == static_cast<Index>(mesh.num_facets()),
          "facet2vertex: one feature row per facet required");
  const NormalsAreas na = compute_normals_areas(mesh);
  const auto adj = VertexFacetAdjacency::build(mesh.num_vertices(),
                                               mesh.facets);
  return facet2vertex(adj, normal_basis(filter.degree, na.normals),
                      facet_features, filter.coefficients);
}

// -- vertex2facet ------------------------------------------------------------

Matrix anchor_basis(int degree) {
  const SphericalAngles anchors[3] = {
      {kPi / 2.0, 0.0}, {kPi / 2.0, kPi / 2.0}, {0.0, 0.0}};
  return basis_matrix(degree, anchors);
}

Matrix vertex2facet(std::span<const Facet> facets, const Matrix& anchors,
                    const Matrix& vertex_features,
                    const Matrix& coefficients) {
  require(anchors.rows() == 3 && anchors.cols() == coefficients.rows(),
          "vertex2facet: anchor basis shape mismatch");
  require(vertex_features.cols() == coefficients.cols(),
          "vertex2facet: channel mismatch between features and filter");
  check_facets(facets, vertex_features.rows());
  const Matrix corner_filters = anchors * coefficients;  // 3 x C
  Matrix out(static_cast<Index>(facets.size()), vertex_features.cols());
  parallel_for(facets.size(), [&](std::size_t f) {
    const Facet& t = facets[f];
    out.row(static_cast<Index>(f)) =
        corner_filters.row(0).cwiseProduct(vertex_features.row(t[0])) +
        corner_filters.row(1).cwiseProduct(vertex_features.row(t[1])) +
        corner_filters.row(2).cwiseProduct(vertex_features.row(t[2]));
  });
  return out;
}

ConvGrads vertex2facet_backward(const VertexFacetAdjacency& adj,
                                std::span<const Facet> facets,
                                const Matrix& anchors,
                                const Matrix& vertex_features,
                                const Matrix& coefficients,
                                const Matrix& upstream) {
  require(upstream.rows() == static_cast<Index>(facets.size()) &&
              upstream.cols() == vertex_features.cols(),
          "vertex2facet_backward: upstream shape mismatch");
  const Matrix corner_filters = anchors * coefficients;
  const std::size_t n = adj.num_vertices();
  ConvGrads g;
  g.input = Matrix::Zero(static_cast<Index>(n), vertex_features.cols());
  parallel_for(n, [&](std::size_t v) {
    auto row = g.input.row(static_cast<Index>(v));
    for (int k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) {
      row += corner_filters.row(adj.corners[k])
                 .cwiseProduct(upstream.row(adj.facets[k]));
    }
  });
  Matrix d_corner = Matrix::Zero(3, vertex_features.cols());
  parallel_for(3, [&](std::size_t k) {
    auto row = d_corner.row(static_cast<Index>(k));
    for (std::size_t f = 0; f < facets.size(); ++f) {
      row += vertex_features.row(facets[f][k])
                 .cwiseProduct(upstream.row(static_cast<Index>(f)));
    }
  });
  g.coefficients = anchors.transpose() * d_corner;
  return g;
}

Matrix vertex2facet(std::span<const Facet> facets,
                    const Matrix& vertex_features,
                    const HarmonicFilter& filter) {
  filter.validate();
  return vertex2facet(facets, anchor_basis(filter.degree), vertex_features,
                      filter.coefficients);
}

Vertex2VertexResult vertex2vertex(const TriMesh& mesh,
                                  const Matrix& vertex_features,
                                  const HarmonicFilter& to_facet,
                                  const HarmonicFilter& to_vertex) {
  Vertex2VertexResult r;
  r.facet_features = vertex2facet(mesh.facets, vertex_features, to_facet);
  r.vertex_features = facet2vertex(mesh, r.facet_features, to_vertex);
  return r;
}

// -- facet2facet -------------------------------------------------------------

Matrix texture_basis(int degree, const TextureField& texture) {
  std::vector<SphericalAngles> angles(texture.barycentric.size());
  for (std::size_t k = 0; k < angles.size(); ++k) {
    angles[k] = barycentric_to_angles(texture.barycentric[k]);
  }
  return basis_matrix(degree, angles);
}

Matrix texture_colors(const TextureField& texture) {
  Matrix colors(static_cast<Index>(texture.colors.size()), 3);
  for (std::size_t k = 0; k < texture.colors.size(); ++k) {
    colors.row(static_cast<Index>(k)) = texture.colors[k].transpose();
  }
  return colors;
}

namespace {

// Z_f = 1/K sum_k basis_k (x) color_k, laid out as t * 3 + i.
Matrix texture_moments(const TextureField& texture, const Matrix& basis) {
  const Index t_size = basis.cols();
  const std::size_t m = texture.num_facets();
  Matrix z = Matrix::Zero(static_cast<Index>(m), 3 * t_size);
  parallel_for(m, [&](std::size_t f) {
    const std::size_t begin = texture.offsets[f];
    const std::size_t end = texture.offsets[f + 1];
    if (begin == end) return;
    auto row = z.row(static_cast<Index>(f));
    for (std::size_t k = begin; k < end; ++k) {
      const Vec3& h = texture.colors[k];
      for (Index t = 0; t < t_size; ++t) {
        const double y = basis(static_cast<Index>(k), t);
        row(3 * t) += y * h.x();
        row(3 * t + 1) += y * h.y();
        row(3 * t + 2) += y * h.z();
      }
    }
    row /= static_cast<double>(end - begin);
  });
  return z;
}

void check_texture(const TextureField& texture, const Matrix& basis,
                   const Matrix& kernel) {
  require(!texture.offsets.empty() &&
              texture.offsets.back() == texture.colors.size() &&
              texture.colors.size() == texture.barycentric.size(),
          "facet2facet: texture offsets are inconsistent");
  require(basis.rows() == static_cast<Index>(texture.colors.size()),
          "facet2facet: one basis row per texture sample required");
  require(kernel.rows() == 3 * basis.cols(),
          "facet2facet: kernel must have 3T rows");
}

}  // namespace

Matrix facet2facet(const TextureField& texture, const Matrix& sample_basis,
                   const Matrix& kernel, std::vector<std::uint8_t>* empty) {
  check_texture(texture, sample_basis, kernel);
  if (empty != nullptr) {
    empty->assign(texture.num_facets(), 0);
    for (std::size_t f = 0; f < texture.num_facets(); ++f) {
      (*empty)[f] = texture.samples_of(f) == 0 ? 1 : 0;
    }
  }
  return texture_moments(texture, sample_basis) * kernel;
}

ConvGrads facet2facet_backward(const TextureField& texture,
                               const Matrix& sample_basis,
                               const Matrix& kernel, const Matrix& upstream) {
  check_texture(texture, sample_basis, kernel);
  require(upstream.rows() == static_cast<Index>(texture.num_facets()) &&
              upstream.cols() == kernel.cols(),
          "facet2facet_backward: upstream shape mismatch");
  ConvGrads g;
  g.coefficients =
      texture_moments(texture, sample_basis).transpose() * upstream;
  const Matrix d_moments = upstream * kernel.transpose();  // M x 3T
  const Index t_size = sample_basis.cols();
  g.input = Matrix::Zero(static_cast<Index>(texture.colors.size()), 3);
  parallel_for(texture.num_facets(), [&](std::size_t f) {
    const std::size_t begin = texture.offsets[f];
    const std::size_t end = texture.offsets[f + 1];
    if (begin == end) return;
    const double inv = 1.0 / static_cast<double>(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
      for (int i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (Index t = 0; t < t_size; ++t) {
          acc += sample_basis(static_cast<Index>(k), t) *
                 d_moments(static_cast<Index>(f), 3 * t + i);
        }
        g.input(static_cast<Index>(k), i) = acc * inv;
      }
    }
  });
  return g;
}

// -- point cloud -------------------------------------------------------------

NeighborList radius_search(std::span<const Vec3> points,
                           std::span<const Vec3> queries, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ArgumentError("radius_search: radius must be positive");
  }
  NeighborList out;
  out.offsets.assign(queries.size() + 1, 0);
  if (points.empty() || queries.empty()) return out;

  Vec3 origin = points[0];
  for (const Vec3& p : points) origin = origin.cwiseMin(p);
  std::vector<std::pair<Cell, int>> binned(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    binned[i] = {cell_of(points[i], origin, radius), static_cast<int>(i)};
  }
  std::sort(binned.begin(), binned.end());

  const double r2 = radius * radius;
  std::vector<std::vector<int>> found(queries.size());
  parallel_for(queries.size(), [&](std::size_t q) {
    const Vec3& x = queries[q];
    const Cell c = cell_of(x, origin, radius);
    auto& list = found[q];
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const Cell probe{c[0] + dx, c[1] + dy, c[2] + dz};
          auto it = std::lower_bound(
              binned.begin(), binned.end(), probe,
              [](const std::pair<Cell, int>& e, const Cell& key) {
                return e.first < key;
              });
          for (; it != binned.end() && it->first == probe; ++it) {
            if ((points[it->second] - x).squaredNorm() <= r2) {
              list.push_back(it->second);
            }
          }
        }
      }
    }
    std::sort(list.begin(), list.end());
  });

  for (std::size_t q = 0; q < queries.size(); ++q) {
    out.offsets[q + 1] = out.offsets[q] + static_cast<int>(found[q].size());
  }
  out.indices.reserve(static_cast<std::size_t>(out.offsets.back()));
  for (const auto& list : found) {
    out.indices.insert(out.indices.end(), list.begin(), list.end());
  }
  out.displacements.resize(out.indices.size());
  out.distances.resize(out.indices.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (int k = out.offsets[q]; k < out.offsets[q + 1]; ++k) {
      out.displacements[k] = points[out.indices[k]] - queries[q];
      out.distances[k] = out.displacements[k].norm();
    }
  }
  return out;
}

PointPairGeometry point_pair_geometry(const NeighborList& neighbors,
                                      int degree, double radius) {
  if (!(radius > 0.0)) throw ArgumentError("point geometry: radius must be > 0");
  const std::size_t pairs = neighbors.num_pairs();
  PointPairGeometry g;
  g.radius = radius;
  g.basis = Matrix::Zero(static_cast<Index>(pairs), basis_size(degree));
  g.z.assign(pairs, 0.0);
  bool clamped = false;
  for (std::size_t k = 0; k < pairs; ++k) {
    const double r = neighbors.distances[k];
    if (r <= 0.0) continue;
    if (r > radius) clamped = true;
    g.z[k] = std::min(r, radius) / radius;
    const SphericalAngles a =
        direction_to_angles(neighbors.displacements[k] / r);
    auto row = g.basis.row(static_cast<Index>(k));
    real_sh_basis(degree, a.theta, a.phi,
                  std::span<double>(row.data(), row.size()));
  }
  if (clamped) log_warning("point_pair_geometry: distances clamped to radius");
  return g;
}

Matrix pcloud_conv(const NeighborList& neighbors,
                   const PointPairGeometry& geometry,
                   const Matrix& point_features, const Matrix& coefficients,
                   const RowVector& radial_constant,
                   std::vector<std::uint8_t>* empty) {
  require(point_features.cols() == coefficients.cols() &&
              radial_constant.size() == coefficients.cols(),
          "pcloud_conv: channel mismatch between features and filter");
  require(geometry.basis.cols() == coefficients.rows(),
          "pcloud_conv: coefficient rows must equal basis size");
  require(geometry.basis.rows() == static_cast<Index>(neighbors.num_pairs()),
          "pcloud_conv: geometry does not match neighbor list");
  for (int p : neighbors.indices) {
    if (p < 0 || p >= point_features.rows()) {
      throw StructuralError("pcloud_conv: neighbor index out of range");
    }
  }
  const Matrix angular = geometry.basis * coefficients;  // pairs x C
  const std::size_t nq = neighbors.num_queries();
  Matrix out = Matrix::Zero(static_cast<Index>(nq), point_features.cols());
  if (empty != nullptr) empty->assign(nq, 0);
  parallel_for(nq, [&](std::size_t q) {
    const int begin = neighbors.offsets[q];
    const int end = neighbors.offsets[q + 1];
    if (begin == end) {
      if (empty != nullptr) (*empty)[q] = 1;
      return;
    }
    auto row = out.row(static_cast<Index>(q));
    for (int k = begin; k < end; ++k) {
      const double z = geometry.z[k];
      row += (z * angular.row(k) + (1.0 - z) * radial_constant)
                 .cwiseProduct(point_features.row(neighbors.indices[k]));
    }
    row /= static_cast<double>(end - begin);
  });
  return out;
}

ConvGrads pcloud_conv_backward(const NeighborList& neighbors,
                               const PointPairGeometry& geometry,
                               const Matrix& point_features,
                               const Matrix& coefficients,
                               const RowVector& radial_constant,
                               const Matrix& upstream) {
  const std::size_t nq = neighbors.num_queries();
  const std::size_t pairs = neighbors.num_pairs();
  require(upstream.rows() == static_cast<Index>(nq) &&
              upstream.cols() == point_features.cols(),
          "pcloud_conv_backward: upstream shape mismatch");
  const Index c = point_features.cols();
  const Matrix angular = geometry.basis * coefficients;

  // Per-pair scaled upstream dg_q / |N(q)|, and the filter gradient per pair.
  Matrix scaled(static_cast<Index>(pairs), c);
  for (std::size_t q = 0; q < nq; ++q) {
    const int begin = neighbors.offsets[q];
    const int end = neighbors.offsets[q + 1];
    for (int k = begin; k < end; ++k) {
      scaled.row(k) = upstream.row(static_cast<Index>(q)) /
                      static_cast<double>(end - begin);
    }
  }
  Matrix d_filter(static_cast<Index>(pairs), c);
  parallel_for(pairs, [&](std::size_t k) {
    d_filter.row(static_cast<Index>(k)) =
        scaled.row(static_cast<Index>(k))
            .cwiseProduct(point_features.row(neighbors.indices[k]));
  });

  ConvGrads g;
  Matrix d_angular = d_filter;
  g.radial_constant = RowVector::Zero(c);
  for (std::size_t k = 0; k < pairs; ++k) {
    const double z = geometry.z[k];
    g.radial_constant += (1.0 - z) * d_filter.row(static_cast<Index>(k));
    d_angular.row(static_cast<Index>(k)) *= z;
  }
  g.coefficients = geometry.basis.transpose() * d_angular;

  // Gather point gradients through the transposed neighbor lists.
  std::vector<int> by_point(pairs);
  for (std::size_t k = 0; k < pairs; ++k) by_point[k] = static_cast<int>(k);
  std::stable_sort(by_point.begin(), by_point.end(), [&](int a, int b) {
    return neighbors.indices[a] < neighbors.indices[b];
  });
  std::vector<int> point_offsets(static_cast<std::size_t>(point_features.rows()) + 1, 0);
  for (int p : neighbors.indices) ++point_offsets[static_cast<std::size_t>(p) + 1];
  for (std::size_t p = 0; p + 1 < point_offsets.size(); ++p) {
    point_offsets[p + 1] += point_offsets[p];
  }
  g.input = Matrix::Zero(point_features.rows(), c);
  parallel_for(static_cast<std::size_t>(point_features.rows()), [&](std::size_t p) {
    auto row = g.input.row(static_cast<Index>(p));
    for (int s = point_offsets[p]; s < point_offsets[p + 1]; ++s) {
      const int k = by_point[s];
      const double z = geometry.z[k];
      row += (z * angular.row(k) + (1.0 - z) * radial_constant)
                 .cwiseProduct(scaled.row(k));
    }
  });
  return g;
}

Matrix pcloud_conv(const NeighborList& neighbors, const Matrix& point_features,
                   const HarmonicFilter& filter) {
  filter.validate();
  if (!filter.radial()) {
    throw ArgumentError("pcloud_conv: filter needs a radial constant");
  }
  const PointPairGeometry geometry =
      point_pair_geometry(neighbors, filter.degree, filter.radius);
  return pcloud_conv(neighbors, geometry, point_features, filter.coefficients,
                     filter.radial_constant);
}

}  // namespace meshkit
