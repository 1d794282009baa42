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

#include "meshkit/decimation.h"

#include "meshkit/parallel.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <tuple>

namespace meshkit {
namespace {

struct FacetKey {
  std::array<int, 3> sorted;
  std::size_t index;
  bool operator<(const FacetKey& o) const {
    return std::tie(sorted, index) < std::tie(o.sorted, o.index);
  }
};

// Drops facets with repeated indices and later copies of the same vertex set.
std::vector<Facet> clean_facets(std::vector<Facet> facets) {
  std::vector<FacetKey> keys;
  keys.reserve(facets.size());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const Facet& t = facets[f];
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) continue;
    std::array<int, 3> s = t;
    std::sort(s.begin(), s.end());
    keys.push_back({s, f});
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::uint8_t> keep(facets.size(), 0);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i == 0 || keys[i].sorted != keys[i - 1].sorted) keep[keys[i].index] = 1;
  }
  std::vector<Facet> out;
  out.reserve(keys.size());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    if (keep[f]) out.push_back(facets[f]);
  }
  return out;
}

double pair_cost(const VertexQuadric& a, const VertexQuadric& b,
                 const Vec3& pa, const Vec3& pb) {
  return (a + b).evaluate(0.5 * (pa + pb));
}

}  // namespace

VertexQuadric VertexQuadric::from_plane(const Vec3& n, double d,
                                        double weight) {
  VertexQuadric r;
  const double p[4] = {n.x(), n.y(), n.z(), d};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) r.q[k++] = weight * p[i] * p[j];
  }
  return r;
}

VertexQuadric& VertexQuadric::operator+=(const VertexQuadric& other) {
  for (int i = 0; i < 10; ++i) q[i] += other.q[i];
  return *this;
}

double VertexQuadric::evaluate(const Vec3& x) const {
  const double a = x.x(), b = x.y(), c = x.z();
  return q[0] * a * a + 2.0 * q[1] * a * b + 2.0 * q[2] * a * c +
         2.0 * q[3] * a + q[4] * b * b + 2.0 * q[5] * b * c + 2.0 * q[6] * b +
         q[7] * c * c + 2.0 * q[8] * c + q[9];
}

Eigen::Matrix4d VertexQuadric::matrix() const {
  Eigen::Matrix4d m;
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      m(i, j) = q[k];
      m(j, i) = q[k];
      ++k;
    }
  }
  return m;
}

std::vector<VertexQuadric> vertex_quadrics(const TriMesh& mesh) {
  const NormalsAreas na = compute_normals_areas(mesh);
  std::vector<VertexQuadric> facet_q(mesh.num_facets());
  parallel_for(mesh.num_facets(), [&](std::size_t f) {
    if (na.degenerate[f]) return;
    const Vec3& n = na.normals[f];
    const double d = -n.dot(mesh.vertices[mesh.facets[f][0]]);
    facet_q[f] = VertexQuadric::from_plane(n, d, na.areas[f]);
  });
  const auto adj = VertexFacetAdjacency::build(mesh.num_vertices(),
                                               mesh.facets);
  std::vector<VertexQuadric> out(mesh.num_vertices());
  parallel_for(mesh.num_vertices(), [&](std::size_t v) {
    for (int k = adj.offsets[v]; k < adj.offsets[v + 1]; ++k) {
      out[v] += facet_q[adj.facets[k]];
    }
  });
  return out;
}

std::vector<std::array<int, 2>> unique_edges(const TriMesh& mesh) {
  std::vector<std::uint64_t> keys;
  keys.reserve(mesh.num_facets() * 3);
  for (const Facet& t : mesh.facets) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k];
      const int b = t[(k + 1) % 3];
      if (a == b) continue;
      const auto lo = static_cast<std::uint64_t>(std::min(a, b));
      const auto hi = static_cast<std::uint64_t>(std::max(a, b));
      keys.push_back((lo << 32) | hi);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::array<int, 2>> edges(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    edges[i] = {static_cast<int>(keys[i] >> 32),
                static_cast<int>(keys[i] & 0xffffffffu)};
  }
  return edges;
}

double contraction_cost(std::span<const VertexQuadric> quadrics,
                        std::span<const int> members, const Vec3& position) {
  VertexQuadric sum;
  for (int v : members) sum += quadrics[v];
  return sum.evaluate(position);
}

std::vector<VertexPair> sorted_pairs(const TriMesh& mesh,
                                     std::span<const VertexQuadric> quadrics) {
  if (quadrics.size() != mesh.num_vertices()) {
    throw ArgumentError("sorted_pairs: one quadric per vertex required");
  }
  check_indices(mesh);
  const auto edges = unique_edges(mesh);
  std::vector<VertexPair> pairs(edges.size());
  parallel_for(edges.size(), [&](std::size_t e) {
    const auto [a, b] = edges[e];
    pairs[e] = {a, b,
                pair_cost(quadrics[a], quadrics[b], mesh.vertices[a],
                          mesh.vertices[b])};
  });
  std::sort(pairs.begin(), pairs.end(),
            [](const VertexPair& x, const VertexPair& y) {
              return std::tie(x.cost, x.first, x.second) <
                     std::tie(y.cost, y.first, y.second);
            });
  return pairs;
}

ClusterMap cluster_vertices(std::span<const VertexPair> pairs, int num_remove,
                            int num_vertices) {
  if (num_remove < 0) throw ArgumentError("cluster_vertices: N_r must be >= 0");
  if (num_vertices < 0) throw ArgumentError("cluster_vertices: N must be >= 0");
  for (const VertexPair& p : pairs) {
    if (p.first < 0 || p.second < 0 || p.first >= num_vertices ||
        p.second >= num_vertices || p.first == p.second) {
      throw StructuralError("cluster_vertices: invalid vertex pair");
    }
  }
  std::vector<int> cluster(static_cast<std::size_t>(num_vertices), -1);
  int next = 0;
  int removed = 0;

  for (const VertexPair& p : pairs) {
    if (removed >= num_remove) break;
    if (cluster[p.first] < 0 && cluster[p.second] < 0) {
      cluster[p.first] = cluster[p.second] = next++;
      ++removed;
    }
  }
  for (const VertexPair& p : pairs) {
    if (removed >= num_remove) break;
    const bool a_free = cluster[p.first] < 0;
    const bool b_free = cluster[p.second] < 0;
    if (a_free && b_free) {
      cluster[p.first] = cluster[p.second] = next++;
      ++removed;
    } else if (a_free) {
      cluster[p.first] = cluster[p.second];
      ++removed;
    } else if (b_free) {
      cluster[p.second] = cluster[p.first];
      ++removed;
    }
  }
  for (int& c : cluster) {
    if (c < 0) c = next++;
  }

  ClusterMap map;
  map.vcluster = cluster;
  map.iomap.resize(cluster.size());
  std::vector<int> out_of_cluster(static_cast<std::size_t>(next), -1);
  int out = 0;
  for (std::size_t v = 0; v < cluster.size(); ++v) {
    int& slot = out_of_cluster[cluster[v]];
    if (slot < 0) slot = out++;
    map.iomap[v] = slot;
  }
  map.num_output = out;
  return map;
}

TriMesh contract_clusters(const TriMesh& mesh, const ClusterMap& map) {
  check_cluster_map(map);
  if (map.num_input() != mesh.num_vertices()) {
    throw ArgumentError("contract_clusters: map does not match mesh");
  }
  check_indices(mesh);
  TriMesh out;
  out.vertices = cluster_centroids(mesh.vertices, map);
  std::vector<Facet> remapped(mesh.num_facets());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Facet& t = mesh.facets[f];
    remapped[f] = {map.iomap[t[0]], map.iomap[t[1]], map.iomap[t[2]]};
  }
  out.facets = clean_facets(std::move(remapped));
  return out;
}

double clustering_cost(const TriMesh& mesh,
                       std::span<const VertexQuadric> quadrics,
                       const ClusterMap& map) {
  const ClusterMembers members = cluster_members(map);
  double total = 0.0;
  for (int o = 0; o < map.num_output; ++o) {
    const auto group = members.of(o);
    if (group.size() < 2) continue;
    Vec3 centroid = Vec3::Zero();
    for (int v : group) centroid += mesh.vertices[v];
    centroid /= static_cast<double>(group.size());
    total += contraction_cost(quadrics, group, centroid);
  }
  return total;
}

int stride_target(std::size_t num_vertices, double stride) {
  if (!(stride >= 1.0)) throw ArgumentError("stride must be >= 1");
  const double t = std::ceil(static_cast<double>(num_vertices) / stride);
  return std::max(1, static_cast<int>(t));
}

DecimationResult decimate(const TriMesh& mesh, int target_vertices,
                          int max_iters) {
  if (target_vertices < 1) throw ArgumentError("decimate: target must be >= 1");
  if (max_iters < 1) throw ArgumentError("decimate: max_iters must be >= 1");
  check_indices(mesh);
  const auto n_in = static_cast<int>(mesh.num_vertices());
  DecimationResult result;
  result.mesh = mesh;
  result.cluster_map = identity_cluster_map(mesh.num_vertices());
  if (target_vertices > n_in) {
    log_warning("decimate: target exceeds vertex count; returning input");
    return result;
  }
  while (result.iterations < max_iters &&
         static_cast<int>(result.mesh.num_vertices()) > target_vertices) {
    const auto n = static_cast<int>(result.mesh.num_vertices());
    const auto quadrics = vertex_quadrics(result.mesh);
    const auto pairs = sorted_pairs(result.mesh, quadrics);
    if (pairs.empty()) break;
    const ClusterMap step = cluster_vertices(pairs, n - target_vertices, n);
    if (step.num_output == n) break;
    result.total_cost += clustering_cost(result.mesh, quadrics, step);
    result.mesh = contract_clusters(result.mesh, step);
    result.cluster_map = compose(result.cluster_map, step);
    ++result.iterations;
  }
  result.removed_count = n_in - static_cast<int>(result.mesh.num_vertices());
  return result;
}

DecimationResult decimate_voxel(const TriMesh& mesh, double grid_size) {
  DecimationResult result;
  result.cluster_map = voxel_cluster(mesh, grid_size);
  const auto quadrics = vertex_quadrics(mesh);
  result.total_cost = clustering_cost(mesh, quadrics, result.cluster_map);
  result.mesh = contract_clusters(mesh, result.cluster_map);
  result.removed_count = static_cast<int>(mesh.num_vertices()) -
                         static_cast<int>(result.mesh.num_vertices());
  result.iterations = 1;
  return result;
}

TriMesh iterative_qem(const TriMesh& mesh, int target_vertices) {
  if (target_vertices < 1) throw ArgumentError("iterative_qem: target >= 1");
  check_indices(mesh);
  const std::size_t n = mesh.num_vertices();
  std::vector<Vec3> pos = mesh.vertices;
  std::vector<VertexQuadric> quadric = vertex_quadrics(mesh);
  std::vector<std::vector<int>> nbrs(n);
  for (const auto& [a, b] : unique_edges(mesh)) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  std::vector<std::uint32_t> version(n, 0);
  std::vector<int> parent(n);
  for (std::size_t v = 0; v < n; ++v) parent[v] = static_cast<int>(v);

  struct Entry {
    double cost;
    int a, b;
    std::uint32_t va, vb;
    bool operator>(const Entry& o) const {
      return std::tie(cost, a, b) > std::tie(o.cost, o.a, o.b);
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  auto push = [&](int a, int b) {
    heap.push({pair_cost(quadric[a], quadric[b], pos[a], pos[b]), a, b,
               version[a], version[b]});
  };
  for (std::size_t a = 0; a < n; ++a) {
    for (int b : nbrs[a]) {
      if (static_cast<int>(a) < b) push(static_cast<int>(a), b);
    }
  }

  auto alive = static_cast<long long>(n);
  while (alive > target_vertices && !heap.empty()) {
    const Entry e = heap.top();
    heap.pop();
    if (parent[e.a] != e.a || parent[e.b] != e.b) continue;
    if (version[e.a] != e.va || version[e.b] != e.vb) continue;
    const int keep = e.a;
    const int gone = e.b;
    pos[keep] = 0.5 * (pos[keep] + pos[gone]);
    quadric[keep] += quadric[gone];
    parent[gone] = keep;
    --alive;
    for (int w : nbrs[gone]) {
      if (w == keep) continue;
      auto& list = nbrs[w];
      list.erase(std::remove(list.begin(), list.end(), gone), list.end());
      if (std::find(list.begin(), list.end(), keep) == list.end()) {
        list.push_back(keep);
      }
      if (std::find(nbrs[keep].begin(), nbrs[keep].end(), w) ==
          nbrs[keep].end()) {
        nbrs[keep].push_back(w);
      }
    }
    auto& own = nbrs[keep];
    own.erase(std::remove(own.begin(), own.end(), gone), own.end());
    nbrs[gone].clear();
    ++version[gone];
    ++version[keep];
    for (int w : own) push(std::min(keep, w), std::max(keep, w));
  }

  std::function<int(int)> root = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::vector<int> out_index(n, -1);
  TriMesh out;
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] == static_cast<int>(v)) {
      out_index[v] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(pos[v]);
    }
  }
  std::vector<Facet> facets(mesh.num_facets());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    for (int k = 0; k < 3; ++k) {
      facets[f][k] = out_index[root(mesh.facets[f][k])];
    }
  }
  out.facets = clean_facets(std::move(facets));
  return out;
}

}  // namespace meshkit
