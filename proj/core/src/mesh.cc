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

#include "meshkit/mesh.h"

#include "meshkit/parallel.h"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace meshkit {
namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint32_t>(std::min(a, b));
  const auto hi = static_cast<std::uint32_t>(std::max(a, b));
  return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

VertexFacetAdjacency VertexFacetAdjacency::build(
    std::size_t num_vertices, std::span<const Facet> facets) {
  VertexFacetAdjacency adj;
  adj.offsets.assign(num_vertices + 1, 0);
  for (const Facet& f : facets) {
    for (int v : f) {
      if (v < 0 || static_cast<std::size_t>(v) >= num_vertices) {
        throw StructuralError("adjacency: facet index out of range");
      }
      ++adj.offsets[static_cast<std::size_t>(v) + 1];
    }
  }
  for (std::size_t v = 0; v < num_vertices; ++v) {
    adj.offsets[v + 1] += adj.offsets[v];
  }
  adj.facets.resize(static_cast<std::size_t>(adj.offsets.back()));
  adj.corners.resize(adj.facets.size());
  std::vector<int> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (std::size_t f = 0; f < facets.size(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int slot = cursor[facets[f][k]]++;
      adj.facets[slot] = static_cast<int>(f);
      adj.corners[slot] = static_cast<std::uint8_t>(k);
    }
  }
  return adj;
}

void check_indices(const TriMesh& mesh) {
  const auto n = static_cast<long long>(mesh.num_vertices());
  for (std::size_t f = 0; f < mesh.facets.size(); ++f) {
    for (int v : mesh.facets[f]) {
      if (v < 0 || v >= n) {
        throw StructuralError("facet " + std::to_string(f) +
                              " references vertex " + std::to_string(v) +
                              " outside [0, " + std::to_string(n) + ")");
      }
    }
  }
}

NormalsAreas compute_normals_areas(const TriMesh& mesh) {
  check_indices(mesh);
  const std::size_t m = mesh.num_facets();
  NormalsAreas out;
  out.normals.resize(m);
  out.areas.resize(m);
  out.degenerate.resize(m);
  parallel_for(m, [&](std::size_t f) {
    const auto& [a, b, c] = mesh.facets[f];
    const Vec3& x1 = mesh.vertices[a];
    const Vec3 cross = (mesh.vertices[b] - x1).cross(mesh.vertices[c] - x1);
    const double norm = cross.norm();
    out.areas[f] = 0.5 * norm;
    if (out.areas[f] < kDegenerateArea) {
      out.normals[f] = Vec3(0.0, 0.0, 1.0);
      out.degenerate[f] = 1;
    } else {
      out.normals[f] = cross / norm;
      out.degenerate[f] = 0;
    }
  });
  return out;
}

FacetGeometrics compute_facet_geometrics(const TriMesh& mesh,
                                         bool with_height) {
  if (mesh.facets.empty()) {
    throw ArgumentError("compute_facet_geometrics: mesh has no facets");
  }
  const NormalsAreas na = compute_normals_areas(mesh);
  const std::size_t m = mesh.num_facets();
  FacetGeometrics out;
  out.features.resize(static_cast<Eigen::Index>(m),
                      geometric_feature_count(with_height));
  out.degenerate = na.degenerate;
  parallel_for(m, [&](std::size_t f) {
    const auto& [a, b, c] = mesh.facets[f];
    const Vec3& x1 = mesh.vertices[a];
    const Vec3& x2 = mesh.vertices[b];
    const Vec3& x3 = mesh.vertices[c];
    const double l1 = (x2 - x1).norm();
    const double l2 = (x3 - x2).norm();
    const double l3 = (x1 - x3).norm();
    auto row = out.features.row(static_cast<Eigen::Index>(f));
    row(0) = l1;
    row(1) = l2;
    row(2) = l3;
    if (l1 > 0.0 && l2 > 0.0 && l3 > 0.0) {
      row(3) = clamp_unit((x2 - x1).dot(x3 - x1) / (l1 * l3));
      row(4) = clamp_unit((x1 - x2).dot(x3 - x2) / (l1 * l2));
      row(5) = clamp_unit((x1 - x3).dot(x2 - x3) / (l2 * l3));
    } else {
      row(3) = row(4) = row(5) = 0.0;
      out.degenerate[f] = 1;
    }
    row(6) = na.normals[f].x();
    row(7) = na.normals[f].y();
    row(8) = na.normals[f].z();
    if (with_height) {
      row(9) = x1.z();
      row(10) = x2.z();
      row(11) = x3.z();
    }
  });
  return out;
}

ValidationReport validate_mesh(const TriMesh& mesh) {
  ValidationReport report;
  const auto n = static_cast<long long>(mesh.num_vertices());
  std::vector<std::uint8_t> referenced(mesh.num_vertices(), 0);
  std::vector<std::uint64_t> edges;
  edges.reserve(mesh.num_facets() * 3);
  std::map<std::array<int, 3>, std::size_t> seen;

  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Facet& t = mesh.facets[f];
    if (std::any_of(t.begin(), t.end(),
                    [n](int v) { return v < 0 || v >= n; })) {
      report.out_of_range_facets.push_back(f);
      continue;
    }
    for (int v : t) referenced[v] = 1;
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      report.repeated_index_facets.push_back(f);
      continue;
    }
    std::array<int, 3> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    auto [it, inserted] = seen.emplace(sorted, f);
    if (!inserted) report.duplicate_facets.emplace_back(it->second, f);
    edges.push_back(edge_key(t[0], t[1]));
    edges.push_back(edge_key(t[1], t[2]));
    edges.push_back(edge_key(t[2], t[0]));
  }

  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i > 2) {
      report.non_manifold_edges.emplace_back(
          static_cast<int>(edges[i] >> 32),
          static_cast<int>(edges[i] & 0xffffffffu));
    }
    i = j;
  }
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    if (!referenced[v]) report.isolated_vertices.push_back(static_cast<int>(v));
  }
  return report;
}

ClusterMap voxel_cluster(const TriMesh& mesh, double grid_size) {
  if (!(grid_size > 0.0) || !std::isfinite(grid_size)) {
    throw ArgumentError("voxel_cluster: grid_size must be positive");
  }
  ClusterMap map;
  const std::size_t n = mesh.num_vertices();
  map.vcluster.resize(n);
  if (n == 0) return map;

  Vec3 lo = mesh.vertices[0];
  for (const Vec3& p : mesh.vertices) lo = lo.cwiseMin(p);

  constexpr double kMaxCell = 4.0e18;
  std::map<std::array<std::int64_t, 3>, int> cells;
  for (std::size_t i = 0; i < n; ++i) {
    std::array<std::int64_t, 3> cell{};
    for (int k = 0; k < 3; ++k) {
      const double c = std::floor((mesh.vertices[i][k] - lo[k]) / grid_size);
      if (c > kMaxCell) {
        throw ArgumentError("voxel_cluster: grid_size too small for extent");
      }
      cell[k] = static_cast<std::int64_t>(c);
    }
    auto [it, inserted] = cells.emplace(cell, static_cast<int>(cells.size()));
    map.vcluster[i] = it->second;
  }
  map.iomap = map.vcluster;
  map.num_output = static_cast<int>(cells.size());
  return map;
}

TextureResolution texture_resolution(double area, double area_min,
                                     double area_max, int alpha, int beta) {
  if (alpha < 0 || beta < 0) {
    throw ArgumentError("texture_resolution: alpha and beta must be >= 0");
  }
  if (area_max < area_min) {
    throw ArgumentError("texture_resolution: area_max < area_min");
  }
  const double slack = 1e-12 * std::max(1.0, std::abs(area_max));
  if (area < area_min - slack || area > area_max + slack) {
    throw ArgumentError("texture_resolution: area outside [area_min, area_max]");
  }
  TextureResolution r;
  if (area_max == area_min) {
    r.gamma = beta;
  } else {
    const double t = std::clamp((area - area_min) / (area_max - area_min), 0.0,
                                1.0);
    r.gamma = static_cast<int>(std::floor(alpha * t)) + beta;
  }
  r.count = (r.gamma + 1) * (r.gamma + 2) / 2;
  return r;
}

std::vector<Vec3> barycentric_lattice(int gamma) {
  if (gamma < 0) throw ArgumentError("barycentric_lattice: gamma must be >= 0");
  if (gamma == 0) return {Vec3::Constant(1.0 / 3.0)};
  std::vector<Vec3> points;
  points.reserve(static_cast<std::size_t>((gamma + 1) * (gamma + 2) / 2));
  const double g = gamma;
  for (int i = gamma; i >= 0; --i) {
    for (int j = gamma - i; j >= 0; --j) {
      const int k = gamma - i - j;
      points.emplace_back(i / g, j / g, k / g);
    }
  }
  return points;
}

TextureField sample_texture(const TriMesh& mesh,
                            std::span<const Vec3> vertex_colors, int alpha,
                            int beta) {
  if (vertex_colors.size() != mesh.num_vertices()) {
    throw ArgumentError("sample_texture: one color per vertex required");
  }
  const NormalsAreas na = compute_normals_areas(mesh);
  TextureField tex;
  tex.offsets.assign(mesh.num_facets() + 1, 0);
  if (mesh.facets.empty()) return tex;
  const auto [min_it, max_it] =
      std::minmax_element(na.areas.begin(), na.areas.end());
  std::vector<int> gammas(mesh.num_facets());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const TextureResolution r =
        texture_resolution(na.areas[f], *min_it, *max_it, alpha, beta);
    gammas[f] = r.gamma;
    tex.offsets[f + 1] = tex.offsets[f] + static_cast<std::size_t>(r.count);
  }
  tex.colors.resize(tex.offsets.back());
  tex.barycentric.resize(tex.offsets.back());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const auto lattice = barycentric_lattice(gammas[f]);
    const auto& [a, b, c] = mesh.facets[f];
    for (std::size_t k = 0; k < lattice.size(); ++k) {
      const Vec3& xi = lattice[k];
      tex.barycentric[tex.offsets[f] + k] = xi;
      tex.colors[tex.offsets[f] + k] = xi[0] * vertex_colors[a] +
                                       xi[1] * vertex_colors[b] +
                                       xi[2] * vertex_colors[c];
    }
  }
  return tex;
}

}  // namespace meshkit
