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


#include "meshkit/synth.h"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>

namespace meshkit {

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

TriMesh icosphere(int subdivisions) {
  if (subdivisions < 0) throw ArgumentError("icosphere: negative subdivisions");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : m.vertices) v.normalize();
  m.facets = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
              {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
              {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
              {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(m.vertices.size());
      m.vertices.push_back((m.vertices[static_cast<std::size_t>(a)] +
                            m.vertices[static_cast<std::size_t>(b)])
                               .normalized());
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Facet> next;
    next.reserve(m.facets.size() * 4);
    for (const Facet& f : m.facets) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.facets = std::move(next);
  }
  return m;
}

namespace {

// Face frames of the cube: outward axis, then two tangents with
// cross(u, v) = normal.
struct CubeFace {
  Vec3 normal, u, v;
};

const std::array<CubeFace, 6>& cube_faces() {
  static const std::array<CubeFace, 6> faces = {{
      {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {{-1, 0, 0}, {0, 0, 1}, {0, 1, 0}},
      {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}},
      {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}},
      {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}},
      {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},
  }};
  return faces;
}

}  // namespace

TriMesh subdivided_cube(int n) {
  if (n < 1) throw ArgumentError("subdivided_cube: n must be positive");
  TriMesh m;
  std::map<std::array<int, 3>, int> ids;
  auto vertex = [&](const Vec3& p) {
    // Lattice coordinates in [0, 2n] are exact integers.
    const std::array<int, 3> key = {static_cast<int>(std::lround((p.x() + 1.0) * n)),
                                    static_cast<int>(std::lround((p.y() + 1.0) * n)),
                                    static_cast<int>(std::lround((p.z() + 1.0) * n))};
    const auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const int id = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(key[0] / static_cast<double>(n) - 1.0,
                            key[1] / static_cast<double>(n) - 1.0,
                            key[2] / static_cast<double>(n) - 1.0);
    ids.emplace(key, id);
    return id;
  };
  for (const CubeFace& face : cube_faces()) {
    std::vector<int> grid(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double a = 2.0 * i / n - 1.0;
        const double b = 2.0 * j / n - 1.0;
        grid[static_cast<std::size_t>(i * (n + 1) + j)] =
            vertex(face.normal + a * face.u + b * face.v);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int p00 = grid[static_cast<std::size_t>(i * (n + 1) + j)];
        const int p10 = grid[static_cast<std::size_t>((i + 1) * (n + 1) + j)];
        const int p01 = grid[static_cast<std::size_t>(i * (n + 1) + j + 1)];
        const int p11 = grid[static_cast<std::size_t>((i + 1) * (n + 1) + j + 1)];
        if ((i + j) % 2 == 0) {
          m.facets.push_back({p00, p10, p11});
          m.facets.push_back({p00, p11, p01});
        } else {
          m.facets.push_back({p00, p10, p01});
          m.facets.push_back({p10, p11, p01});
        }
      }
    }
  }
  return m;
}

TriMesh random_grid_mesh(int rows, int cols, std::mt19937_64& rng,
                         double jitter) {
  if (rows < 2 || cols < 2) throw ArgumentError("random_grid_mesh: need a 2 x 2 lattice");
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  TriMesh m;
  m.vertices.reserve(static_cast<std::size_t>(rows * cols));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m.vertices.emplace_back(i + jitter * unit(rng), j + jitter * unit(rng),
                              unit(rng));
    }
  }
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j + 1 < cols; ++j) {
      const int a = i * cols + j;
      const int b = a + cols;
      const int c = a + 1;
      const int d = b + 1;
      if (coin(rng)) {
        m.facets.push_back({a, b, d});
        m.facets.push_back({a, d, c});
      } else {
        m.facets.push_back({a, b, c});
        m.facets.push_back({b, d, c});
      }
    }
  }
  return m;
}

TriMesh random_mesh_with_edges(std::size_t num_edges, std::mt19937_64& rng) {
  // A square lattice of side k has 3k^2 - 4k + 1 edges.
  const double k = (4.0 + std::sqrt(16.0 + 12.0 * (static_cast<double>(num_edges) - 1.0))) / 6.0;
  const int side = std::max(2, static_cast<int>(std::lround(k)));
  return random_grid_mesh(side, side, rng);
}

const std::vector<std::string>& engraving_motifs() {
  static const std::vector<std::string> motifs = {
      "bar", "cross", "ring", "disk", "ell", "tee", "step", "chevron"};
  return motifs;
}

namespace {

double box_distance(double s, double t, double cx, double cy, double hx, double hy) {
  const double dx = std::abs(s - cx) - hx;
  const double dy = std::abs(t - cy) - hy;
  const double ox = std::max(dx, 0.0);
  const double oy = std::max(dy, 0.0);
  return std::sqrt(ox * ox + oy * oy) + std::min(std::max(dx, dy), 0.0);
}

// Signed distance to the motif in its unit frame; negative inside.
double motif_distance(int motif, double s, double t) {
  constexpr double w = 0.26;
  switch (motif) {
    case 0: return box_distance(s, t, 0, 0, 0.7, w);
    case 1: return std::min(box_distance(s, t, 0, 0, 0.7, w),
                            box_distance(s, t, 0, 0, w, 0.7));
    case 2: return std::abs(std::hypot(s, t) - 0.5) - w;
    case 3: return std::hypot(s, t) - 0.55;
    case 4: return std::min(box_distance(s, t, -0.5, 0, w, 0.7),
                            box_distance(s, t, 0, -0.55, 0.7, w));
    case 5: return std::min(box_distance(s, t, 0, 0.55, 0.7, w),
                            box_distance(s, t, 0, -0.1, w, 0.6));
    case 6: return std::min({box_distance(s, t, -0.45, -0.45, 0.3, 0.3),
                             box_distance(s, t, 0.15, 0.15, 0.3, 0.3),
                             box_distance(s, t, 0.55, 0.55, 0.2, 0.2)});
    default: {
      const double a = box_distance((s + t) / std::sqrt(2.0) + 0.2, (t - s) / std::sqrt(2.0) - 0.2,
                                    0, 0, 0.55, w);
      const double b = box_distance((s - t) / std::sqrt(2.0) + 0.2, (t + s) / std::sqrt(2.0) - 0.2,
                                    0, 0, 0.55, w);
      return std::min(a, b);
    }
  }
}

}  // namespace

std::vector<Sample> synth_engraved_cubes(int n_classes, int per_class,
                                         std::uint64_t seed,
                                         const EngravingOptions& options) {
  if (n_classes < 0 || per_class < 0) {
    throw ArgumentError("synth_engraved_cubes: negative counts");
  }
  if (n_classes > static_cast<int>(engraving_motifs().size())) {
    throw ArgumentError("synth_engraved_cubes: not enough motifs");
  }
  const int n = options.resolution;
  const TriMesh cube = subdivided_cube(n);
  const double soft = 1.0 / n;
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(n_classes * per_class));
  for (int c = 0; c < n_classes; ++c) {
    for (int i = 0; i < per_class; ++i) {
      std::mt19937_64 rng = stream_engine(seed, static_cast<std::uint64_t>(c * per_class + i));
      std::uniform_int_distribution<int> pick_face(0, 5);
      std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
      std::uniform_real_distribution<double> offset(-0.1, 0.1);
      std::uniform_real_distribution<double> scale(0.75, 0.9);
      const CubeFace& face = cube_faces()[static_cast<std::size_t>(pick_face(rng))];
      const double rot = angle(rng);
      const double ox = offset(rng);
      const double oy = offset(rng);
      const double sc = scale(rng);
      const double cr = std::cos(rot);
      const double sr = std::sin(rot);
      Sample sample;
      sample.mesh = cube;
      sample.label = c;
      for (Vec3& p : sample.mesh.vertices) {
        if (std::abs(p.dot(face.normal) - 1.0) > 1e-12) continue;
        const double a = p.dot(face.u);
        const double b = p.dot(face.v);
        if (std::abs(a) > 1.0 - 1e-9 || std::abs(b) > 1.0 - 1e-9) continue;
        const double ua = (a - ox) / sc;
        const double vb = (b - oy) / sc;
        const double s = cr * ua + sr * vb;
        const double t = -sr * ua + cr * vb;
        const double d = motif_distance(c, s, t) * sc;
        const double weight = std::clamp(0.5 - d / (2.0 * soft), 0.0, 1.0);
        p -= face.normal * (options.depth * weight);
      }
      out.push_back(std::move(sample));
    }
  }
  return out;
}

TriMesh normalize_shape(const TriMesh& mesh) {
  TriMesh out = mesh;
  if (out.vertices.empty()) return out;
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& v : out.vertices) centroid += v;
  centroid /= static_cast<double>(out.vertices.size());
  double radius = 0.0;
  for (Vec3& v : out.vertices) {
    v -= centroid;
    radius = std::max(radius, v.norm());
  }
  if (radius == 0.0) {
    log_warning("normalize_shape: all vertices coincide");
    return out;
  }
  for (Vec3& v : out.vertices) v /= radius;
  return out;
}

bool AugmentConfig::identity() const {
  return !flip && scale_min == 1.0 && scale_max == 1.0 && shift == 0.0 &&
         rotation == RotationMode::kNone && vertex_dropout == 0.0 &&
         facet_dropout == 0.0 && color_jitter == 0.0;
}

namespace {

// Keeps facets with keep_facet set and vertices referenced by them.
Sample compact(const Sample& in, const std::vector<std::uint8_t>& keep_facet) {
  std::vector<int> remap(in.mesh.num_vertices(), -1);
  Sample out;
  out.label = in.label;
  for (std::size_t f = 0; f < in.mesh.num_facets(); ++f) {
    if (!keep_facet[f]) continue;
    for (int v : in.mesh.facets[f]) remap[static_cast<std::size_t>(v)] = 0;
  }
  int next = 0;
  for (std::size_t v = 0; v < remap.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = next++;
    out.mesh.vertices.push_back(in.mesh.vertices[v]);
    if (in.textured()) out.colors.push_back(in.colors[v]);
    if (!in.vertex_labels.empty()) out.vertex_labels.push_back(in.vertex_labels[v]);
  }
  for (std::size_t f = 0; f < in.mesh.num_facets(); ++f) {
    if (!keep_facet[f]) continue;
    const Facet& g = in.mesh.facets[f];
    out.mesh.facets.push_back({remap[static_cast<std::size_t>(g[0])],
                               remap[static_cast<std::size_t>(g[1])],
                               remap[static_cast<std::size_t>(g[2])]});
  }
  return out;
}

}  // namespace

Sample augment(const Sample& sample, const AugmentConfig& config,
               std::mt19937_64& rng) {
  if (config.identity()) return sample;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Sample out = sample;

  if (config.vertex_dropout > 0.0 || config.facet_dropout > 0.0) {
    std::vector<std::uint8_t> drop_vertex(out.mesh.num_vertices(), 0);
    for (auto& d : drop_vertex) d = unit(rng) < config.vertex_dropout;
    std::vector<std::uint8_t> keep(out.mesh.num_facets(), 1);
    for (std::size_t f = 0; f < keep.size(); ++f) {
      const Facet& g = out.mesh.facets[f];
      const bool dropped = unit(rng) < config.facet_dropout;
      keep[f] = !dropped && !drop_vertex[static_cast<std::size_t>(g[0])] &&
                !drop_vertex[static_cast<std::size_t>(g[1])] &&
                !drop_vertex[static_cast<std::size_t>(g[2])];
    }
    Sample reduced = compact(out, keep);
    if (reduced.mesh.num_vertices() >= 4) out = std::move(reduced);
  }

  Eigen::Matrix3d linear = Eigen::Matrix3d::Identity();
  if (config.rotation == RotationMode::kAxisZ) {
    const double a = 2.0 * kPi * unit(rng);
    linear.topLeftCorner<2, 2>() << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  } else if (config.rotation == RotationMode::kCubic) {
    std::uniform_int_distribution<int> pick(0, 23);
    const int k = pick(rng);
    static constexpr int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                        {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    const int* perm = perms[k / 4];
    const double odd = k / 4 >= 3 ? -1.0 : 1.0;
    // Two free signs; the third makes the determinant +1.
    const double sx = (k & 1) ? -1.0 : 1.0;
    const double sy = (k & 2) ? -1.0 : 1.0;
    const double sz = sx * sy * odd;
    linear.setZero();
    linear(0, perm[0]) = sx;
    linear(1, perm[1]) = sy;
    linear(2, perm[2]) = sz;
  } else if (config.rotation == RotationMode::kFree) {
    std::normal_distribution<double> g;
    const Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    linear = q.normalized().toRotationMatrix();
  }
  Eigen::Vector3d diag = Eigen::Vector3d::Ones();
  if (config.scale_min != 1.0 || config.scale_max != 1.0) {
    std::uniform_real_distribution<double> s(config.scale_min, config.scale_max);
    diag = Eigen::Vector3d(s(rng), s(rng), s(rng));
  }
  if (config.flip) {
    if (unit(rng) < 0.5) diag.x() = -diag.x();
    if (unit(rng) < 0.5) diag.y() = -diag.y();
  }
  linear = diag.asDiagonal() * linear;
  Vec3 shift = Vec3::Zero();
  if (config.shift > 0.0) {
    std::uniform_real_distribution<double> s(-config.shift, config.shift);
    shift = Vec3(s(rng), s(rng), s(rng));
  }
  const bool z_fixed = linear(2, 0) == 0.0 && linear(2, 1) == 0.0 && linear(2, 2) == 1.0;
  for (Vec3& v : out.mesh.vertices) {
    const double z = v.z();
    v = linear * v + shift;
    if (z_fixed) v.z() = z + shift.z();
  }
  if (linear.determinant() < 0.0) {
    for (Facet& f : out.mesh.facets) std::swap(f[1], f[2]);
  }
  if (config.color_jitter > 0.0 && out.textured()) {
    std::uniform_real_distribution<double> j(-config.color_jitter, config.color_jitter);
    const Vec3 delta(j(rng), j(rng), j(rng));
    for (Vec3& c : out.colors) c = (c + delta).cwiseMax(0.0).cwiseMin(1.0);
  }
  return out;
}

}  // namespace meshkit
