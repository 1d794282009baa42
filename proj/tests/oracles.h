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


// Reference implementations used only by the tests. Each oracle is written
// from the defining formula with plain loops and shares no code with the
// library kernels beyond the data types.

#pragma once

#include "meshkit/cluster_map.h"
#include "meshkit/convolution.h"
#include "meshkit/mesh.h"
#include "meshkit/synth.h"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace meshkit::oracle {

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline double binomial(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

/// P_l^m(x) = (1 - x^2)^(m/2) d^m/dx^m P_l(x) from the explicit coefficient
/// sum P_l(x) = 2^-l sum_k (-1)^k C(l, k) C(2l - 2k, l) x^(l - 2k).
inline double legendre(int l, int m, double x) {
  double d = 0.0;
  for (int k = 0; 2 * k <= l; ++k) {
    const int power = l - 2 * k;
    if (power < m) continue;
    const double c = ((k % 2) ? -1.0 : 1.0) * binomial(l, k) * binomial(2 * l - 2 * k, l);
    // d^m/dx^m x^p = p! / (p - m)! x^(p - m)
    d += c * factorial(power) / factorial(power - m) * std::pow(x, power - m);
  }
  d /= std::pow(2.0, l);
  return std::pow(1.0 - x * x, 0.5 * m) * d;
}

/// Basis entry at index l^2 (zonal), l^2 + m (cosine) or l^2 + l + m (sine).
inline std::vector<double> sh_basis(int degree, double theta, double phi) {
  std::vector<double> out(static_cast<std::size_t>((degree + 1) * (degree + 1)));
  const double x = std::cos(theta);
  for (int l = 0; l <= degree; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * factorial(l - m) /
                                    factorial(l + m));
      const double y = norm * legendre(l, m, x);
      if (m == 0) {
        out[static_cast<std::size_t>(l * l)] = y;
      } else {
        out[static_cast<std::size_t>(l * l + m)] = y * std::cos(m * phi);
        out[static_cast<std::size_t>(l * l + l + m)] = y * std::sin(m * phi);
      }
    }
  }
  return out;
}

inline void angles(const Vec3& d, double& theta, double& phi) {
  const Vec3 u = d.normalized();
  theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  phi = (std::abs(u.x()) < 1e-300 && std::abs(u.y()) < 1e-300) ? 0.0 : std::atan2(u.y(), u.x());
  if (phi < 0.0) phi += 2.0 * kPi;
}

/// Filter value of channel c at a direction.
inline double filter_at(const Matrix& coeffs, int c, const Vec3& direction) {
  const int degree = static_cast<int>(std::lround(std::sqrt(static_cast<double>(coeffs.rows())))) - 1;
  double th = 0.0, ph = 0.0;
  angles(direction, th, ph);
  const std::vector<double> b = sh_basis(degree, th, ph);
  double v = 0.0;
  for (std::size_t t = 0; t < b.size(); ++t) v += b[t] * coeffs(static_cast<Eigen::Index>(t), c);
  return v;
}

inline double filter_at_angles(const Matrix& coeffs, int c, double th, double ph) {
  const int degree = static_cast<int>(std::lround(std::sqrt(static_cast<double>(coeffs.rows())))) - 1;
  const std::vector<double> b = sh_basis(degree, th, ph);
  double v = 0.0;
  for (std::size_t t = 0; t < b.size(); ++t) v += b[t] * coeffs(static_cast<Eigen::Index>(t), c);
  return v;
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// three-term recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

inline Vec3 normal_of(const TriMesh& mesh, const Facet& f) {
  const Vec3& a = mesh.vertices[static_cast<std::size_t>(f[0])];
  const Vec3& b = mesh.vertices[static_cast<std::size_t>(f[1])];
  const Vec3& c = mesh.vertices[static_cast<std::size_t>(f[2])];
  return (b - a).cross(c - a).normalized();
}

/// g_v = mean over incident facets of F(n_f) h_f.
inline Matrix facet2vertex(const TriMesh& mesh, const Matrix& h, const Matrix& coeffs) {
  const Eigen::Index c = h.cols();
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(mesh.num_vertices()), c);
  std::vector<int> count(mesh.num_vertices(), 0);
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    const Vec3 n = normal_of(mesh, mesh.facets[f]);
    for (int corner = 0; corner < 3; ++corner) {
      const int v = mesh.facets[f][static_cast<std::size_t>(corner)];
      ++count[static_cast<std::size_t>(v)];
      for (Eigen::Index ch = 0; ch < c; ++ch) {
        sum(v, ch) += filter_at(coeffs, static_cast<int>(ch), n) * h(static_cast<Eigen::Index>(f), ch);
      }
    }
  }
  for (std::size_t v = 0; v < count.size(); ++v) {
    if (count[v] > 0) sum.row(static_cast<Eigen::Index>(v)) /= count[v];
  }
  return sum;
}

/// g_f = F(pi/2, 0) h_1 + F(pi/2, pi/2) h_2 + F(0, 0) h_3.
inline Matrix vertex2facet(const TriMesh& mesh, const Matrix& h, const Matrix& coeffs) {
  const double th[3] = {kPi / 2, kPi / 2, 0.0};
  const double ph[3] = {0.0, kPi / 2, 0.0};
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(mesh.num_facets()), h.cols());
  for (std::size_t f = 0; f < mesh.num_facets(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int v = mesh.facets[f][static_cast<std::size_t>(k)];
      for (Eigen::Index ch = 0; ch < h.cols(); ++ch) {
        out(static_cast<Eigen::Index>(f), ch) +=
            filter_at_angles(coeffs, static_cast<int>(ch), th[k], ph[k]) * h(v, ch);
      }
    }
  }
  return out;
}

/// g_f[c] = 1/K sum_k sum_i F_{c,i}(xi_k) h_k[i] with kernel row t * 3 + i.
inline Matrix facet2facet(const TextureField& tex, const Matrix& kernel) {
  const int t_size = static_cast<int>(kernel.rows() / 3);
  const int degree = static_cast<int>(std::lround(std::sqrt(static_cast<double>(t_size)))) - 1;
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(tex.num_facets()), kernel.cols());
  for (std::size_t f = 0; f < tex.num_facets(); ++f) {
    const std::size_t k0 = tex.offsets[f], k1 = tex.offsets[f + 1];
    if (k0 == k1) continue;
    for (std::size_t k = k0; k < k1; ++k) {
      double th = 0.0, ph = 0.0;
      angles(tex.barycentric[k], th, ph);
      const std::vector<double> b = sh_basis(degree, th, ph);
      for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
        for (int i = 0; i < 3; ++i) {
          double fv = 0.0;
          for (int t = 0; t < t_size; ++t) fv += b[static_cast<std::size_t>(t)] * kernel(3 * t + i, c);
          out(static_cast<Eigen::Index>(f), c) += fv * tex.colors[k][i];
        }
      }
    }
    out.row(static_cast<Eigen::Index>(f)) /= static_cast<double>(k1 - k0);
  }
  return out;
}

/// Brute-force O(PQ) radius neighbors, ascending point index per query.
inline std::vector<std::vector<int>> radius_neighbors(const std::vector<Vec3>& points,
                                                      const std::vector<Vec3>& queries,
                                                      double radius) {
  std::vector<std::vector<int>> out(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      if ((points[p] - queries[q]).squaredNorm() <= radius * radius) {
        out[q].push_back(static_cast<int>(p));
      }
    }
  }
  return out;
}

/// g_q = 1/|N(q)| sum_p (z F(dir) + (1 - z) c0) h_p with z = r / radius.
inline Matrix pcloud(const std::vector<Vec3>& points, const std::vector<Vec3>& queries,
                     double radius, const Matrix& h, const Matrix& coeffs, const RowVector& c0) {
  const auto nbrs = radius_neighbors(points, queries, radius);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(queries.size()), h.cols());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (nbrs[q].empty()) continue;
    for (int p : nbrs[q]) {
      const Vec3 d = points[static_cast<std::size_t>(p)] - queries[q];
      const double r = d.norm();
      const double z = std::min(r, radius) / radius;
      for (Eigen::Index c = 0; c < h.cols(); ++c) {
        const double ang = r > 0.0 ? filter_at(coeffs, static_cast<int>(c), d) : 0.0;
        out(static_cast<Eigen::Index>(q), c) += (z * ang + (1.0 - z) * c0(c)) * h(p, c);
      }
    }
    out.row(static_cast<Eigen::Index>(q)) /= static_cast<double>(nbrs[q].size());
  }
  return out;
}

/// Pooling over groups of equal iomap value.
inline Matrix pool(const Matrix& x, const ClusterMap& map, bool max_mode) {
  Matrix out(map.num_output, x.cols());
  for (int o = 0; o < map.num_output; ++o) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      double acc = max_mode ? -INFINITY : 0.0;
      int n = 0;
      for (std::size_t i = 0; i < map.num_input(); ++i) {
        if (map.iomap[i] != o) continue;
        acc = max_mode ? std::max(acc, x(static_cast<Eigen::Index>(i), c)) : acc + x(static_cast<Eigen::Index>(i), c);
        ++n;
      }
      out(o, c) = max_mode ? acc : acc / n;
    }
  }
  return out;
}

/// Central differences of a scalar function over every entry of `x`.
inline Matrix numeric_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x,
                               double h = 1e-5) {
  Matrix g(x.rows(), x.cols());
  Matrix probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double keep = probe.data()[i];
    probe.data()[i] = keep + h;
    const double up = f(probe);
    probe.data()[i] = keep - h;
    const double down = f(probe);
    probe.data()[i] = keep;
    g.data()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// ||a - b|| / max(||a||, ||b||), 0 when both vanish.
inline double relative_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// Largest |a - b| scaled by max(1, max |b|).
inline double scaled_max_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng,
                            double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

/// Random cluster map over n inputs with k <= n non-empty clusters.
inline ClusterMap random_cluster_map(int n, int k, std::mt19937_64& rng) {
  std::vector<int> assign(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) assign[static_cast<std::size_t>(i)] = i < k ? i : std::uniform_int_distribution<int>(0, k - 1)(rng);
  std::shuffle(assign.begin(), assign.end(), rng);
  // Relabel clusters by first appearance so ids are contiguous.
  std::vector<int> relabel(static_cast<std::size_t>(k), -1);
  int next = 0;
  ClusterMap map;
  for (int a : assign) {
    int& r = relabel[static_cast<std::size_t>(a)];
    if (r < 0) r = next++;
    map.vcluster.push_back(r);
  }
  map.iomap = map.vcluster;
  map.num_output = k;
  return map;
}

/// Jittered, randomly rotated icosphere (42 vertices, 80 facets) plus one
/// isolated vertex, so normals cover the whole sphere.
inline TriMesh random_small_mesh(std::mt19937_64& rng) {
  TriMesh m = icosphere(1);
  std::normal_distribution<double> n(0.0, 1.0);
  const Eigen::Matrix3d rot =
      Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
  for (Vec3& p : m.vertices) p = rot * (p + 0.08 * Vec3(n(rng), n(rng), n(rng)));
  m.vertices.emplace_back(n(rng), n(rng), n(rng));
  return m;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
}

/// Sum of the entrywise product, the scalar probe used by gradient checks.
inline double dot(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

}  // namespace meshkit::oracle
