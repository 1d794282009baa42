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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Criterion numbers given on the command
// line restrict the run to those criteria.

#include "meshkit/decimation.h"
#include "meshkit/harmonics.h"
#include "meshkit/layers.h"
#include "meshkit/model.h"
#include "meshkit/parallel.h"
#include "meshkit/pooling.h"
#include "meshkit/synth.h"
#include "meshkit/train.h"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "model_check.h"
#include "oracles.h"

namespace meshkit {
namespace {

using oracle::random_matrix;
using oracle::scaled_max_diff;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string format(const char* fmt, ...) {
  char buffer[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buffer, sizeof(buffer), fmt, args);
  va_end(args);
  return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1 ---------------------------------------------------------------------------

Outcome kernel_size() {
  bool ok = basis_size(3) == 16;
  for (int l = 0; l <= 5; ++l) {
    ok &= basis_size(l) == (l + 1) * (l + 1);
    ok &= real_sh_basis(l, 0.7, 1.9).size() == (l + 1) * (l + 1);
  }
  return {ok, format("T(L) = (L+1)^2 for L = 0..5, T(3) = %d", basis_size(3))};
}

// 2 ---------------------------------------------------------------------------

Outcome gram_matrix() {
  constexpr int kDegree = 4;
  const int t = basis_size(kDegree);
  std::vector<double> x, w;
  oracle::gauss_legendre(64, x, w);
  Matrix gram = Matrix::Zero(t, t);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double theta = std::acos(x[i]);
    for (int j = 0; j < 128; ++j) {
      const double phi = 2.0 * kPi * j / 128.0;
      const RowVector b = real_sh_basis(kDegree, theta, phi);
      gram.noalias() += (w[i] * 2.0 * kPi / 128.0) * b.transpose() * b;
    }
  }
  double off = 0.0, diag_err = 0.0;
  for (int a = 0; a < t; ++a) {
    for (int b = 0; b < t; ++b) {
      if (a != b) off = std::max(off, std::abs(gram(a, b)));
    }
  }
  // Unit norm for m = 0, one half otherwise.
  for (int l = 0; l <= kDegree; ++l) {
    diag_err = std::max(diag_err, std::abs(gram(zonal_index(l), zonal_index(l)) - 1.0));
    for (int m = 1; m <= l; ++m) {
      diag_err = std::max(diag_err, std::abs(gram(cosine_index(l, m), cosine_index(l, m)) - 0.5));
      diag_err = std::max(diag_err, std::abs(gram(sine_index(l, m), sine_index(l, m)) - 0.5));
    }
  }
  return {off < 1e-6 && diag_err < 1e-10,
          format("L <= 4: max |off-diagonal| = %.2e, diagonal error = %.2e", off, diag_err)};
}

// 3 ---------------------------------------------------------------------------

Outcome gradient_suite() {
  std::mt19937_64 rng(301);
  std::map<std::string, double> worst;
  auto note = [&](const std::string& name, double err) { worst[name] = std::max(worst[name], err); };
  const int degree = 3, t = 16;
  for (int trial = 0; trial < 3; ++trial) {
    const TriMesh mesh = oracle::random_small_mesh(rng);
    const auto nv = static_cast<Eigen::Index>(mesh.num_vertices());
    const auto nf = static_cast<Eigen::Index>(mesh.num_facets());
    const auto adj = VertexFacetAdjacency::build(mesh.num_vertices(), mesh.facets);
    const Matrix basis = normal_basis(degree, compute_normals_areas(mesh).normals);
    const Matrix anchors = anchor_basis(degree);
    std::vector<Vec3> colors;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Eigen::Index i = 0; i < nv; ++i) colors.emplace_back(u(rng), u(rng), u(rng));
    const TextureField tex = sample_texture(mesh, colors, 2, 1);
    const Matrix tex_basis = texture_basis(degree, tex);
    const NeighborList nb = radius_search(mesh.vertices, mesh.vertices, 0.8);
    const PointPairGeometry pairs = point_pair_geometry(nb, degree, 0.8);
    const ClusterMap map = decimate(mesh, stride_target(mesh.num_vertices(), 2)).cluster_map;

    note("facet2vertex", oracle::op_gradient_error(
                             [&](Tape& tp, const std::vector<Var>& v) {
                               return ops::facet2vertex(tp, adj, mesh.facets, basis, v[0], v[1]);
                             },
                             {random_matrix(nf, 3, rng), random_matrix(t, 3, rng)}, rng));
    note("vertex2facet", oracle::op_gradient_error(
                             [&](Tape& tp, const std::vector<Var>& v) {
                               return ops::vertex2facet(tp, adj, mesh.facets, anchors, v[0], v[1]);
                             },
                             {random_matrix(nv, 3, rng), random_matrix(t, 3, rng)}, rng));
    note("facet2facet", oracle::op_gradient_error(
                            [&](Tape& tp, const std::vector<Var>& v) {
                              return ops::facet2facet(tp, tex, tex_basis, v[0]);
                            },
                            {random_matrix(3 * t, 3, rng)}, rng));
    note("vertex2vertex", oracle::op_gradient_error(
                              [&](Tape& tp, const std::vector<Var>& v) {
                                const Var f = ops::vertex2facet(tp, adj, mesh.facets, anchors, v[0], v[1]);
                                return ops::facet2vertex(tp, adj, mesh.facets, basis, f, v[2]);
                              },
                              {random_matrix(nv, 2, rng), random_matrix(t, 2, rng),
                               random_matrix(t, 2, rng)},
                              rng));
    note("pcloud_conv", oracle::op_gradient_error(
                            [&](Tape& tp, const std::vector<Var>& v) {
                              return ops::pcloud_conv(tp, nb, pairs, v[0], v[1], v[2]);
                            },
                            {random_matrix(nv, 3, rng), random_matrix(t, 3, rng),
                             random_matrix(1, 3, rng)},
                            rng));
    note("pool(max)", oracle::op_gradient_error(
                          [&](Tape& tp, const std::vector<Var>& v) {
                            return ops::pool(tp, v[0], map, PoolMode::kMax);
                          },
                          {random_matrix(nv, 3, rng)}, rng));
    note("pool(avg)", oracle::op_gradient_error(
                          [&](Tape& tp, const std::vector<Var>& v) {
                            return ops::pool(tp, v[0], map, PoolMode::kAverage);
                          },
                          {random_matrix(nv, 3, rng)}, rng));
    note("unpool", oracle::op_gradient_error(
                       [&](Tape& tp, const std::vector<Var>& v) { return ops::unpool(tp, v[0], map); },
                       {random_matrix(map.num_output, 3, rng)}, rng));

    NetworkConfig textured = oracle::toy_network_config();
    textured.textured = true;
    Model init_model(textured, 40 + static_cast<std::uint64_t>(trial));
    Sample s;
    s.mesh = mesh;
    s.colors = colors;
    s.label = 0;
    note("initial_layer",
         oracle::initial_layer_gradient_error(init_model, prepare_sample(s, textured), rng));
  }
  double op_worst = 0.0;
  std::string ops_text;
  for (const auto& [name, err] : worst) {
    op_worst = std::max(op_worst, err);
    ops_text += format(" %s=%.1e", name.c_str(), err);
  }
  double model_worst = 0.0;
  for (Task task : {Task::kClassification, Task::kSegmentation}) {
    const NetworkConfig c = oracle::toy_network_config(task);
    Model model(c, 50);
    model_worst = std::max(model_worst, oracle::model_gradient_error(model, oracle::toy_batch(c, rng)));
  }
  return {op_worst < 1e-6 && model_worst < 1e-4,
          format("max op error %.1e (<1e-6), end-to-end %.1e (<1e-4);", op_worst, model_worst) + ops_text};
}

// 4 ---------------------------------------------------------------------------

TriMesh oracle_instance(int trial, std::mt19937_64& rng) {
  if (trial % 2 == 0) return oracle::random_small_mesh(rng);
  // Large enough to take the threaded path.
  TriMesh m = icosphere(3);
  std::normal_distribution<double> n(0.0, 0.02);
  const Eigen::Matrix3d rot = oracle::random_rotation(rng);
  for (Vec3& p : m.vertices) p = rot * (p + Vec3(n(rng), n(rng), n(rng)));
  return m;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(401);
  const int before = num_threads();
  set_num_threads(4);
  double worst = 0.0;
  int search_mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const TriMesh m = oracle_instance(trial, rng);
    const auto nv = static_cast<Eigen::Index>(m.num_vertices());
    const auto nf = static_cast<Eigen::Index>(m.num_facets());
    HarmonicFilter a = HarmonicFilter::zeros(3, 4), b = a;
    a.coefficients = random_matrix(16, 4, rng);
    b.coefficients = random_matrix(16, 4, rng);
    const Matrix hf = random_matrix(nf, 4, rng);
    const Matrix hv = random_matrix(nv, 4, rng);
    worst = std::max(worst, scaled_max_diff(facet2vertex(m, hf, a), oracle::facet2vertex(m, hf, a.coefficients)));
    const Matrix mid = oracle::vertex2facet(m, hv, a.coefficients);
    worst = std::max(worst, scaled_max_diff(vertex2facet(m.facets, hv, a), mid));
    const Vertex2VertexResult vv = vertex2vertex(m, hv, a, b);
    worst = std::max(worst, scaled_max_diff(vv.vertex_features, oracle::facet2vertex(m, mid, b.coefficients)));

    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec3> colors(m.num_vertices());
    for (Vec3& c : colors) c = {u(rng), u(rng), u(rng)};
    const TextureField tex = sample_texture(m, colors, 2, 1);
    const Matrix kernel = random_matrix(48, 4, rng);
    worst = std::max(worst, scaled_max_diff(facet2facet(tex, texture_basis(3, tex), kernel),
                                            oracle::facet2facet(tex, kernel)));

    const double radius = 0.2 + 0.01 * (trial % 30);
    std::vector<Vec3> queries;
    for (std::size_t i = 0; i < m.num_vertices(); i += 2) queries.push_back(m.vertices[i] * 0.95);
    const NeighborList nb = radius_search(m.vertices, queries, radius);
    const auto want = oracle::radius_neighbors(m.vertices, queries, radius);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const std::vector<int> got(nb.indices.begin() + static_cast<std::ptrdiff_t>(nb.offsets[q]),
                                 nb.indices.begin() + static_cast<std::ptrdiff_t>(nb.offsets[q + 1]));
      search_mismatches += got != want[q];
    }
    HarmonicFilter r = HarmonicFilter::radial_zeros(3, 4, radius);
    r.coefficients = random_matrix(16, 4, rng);
    r.radial_constant = random_matrix(1, 4, rng);
    worst = std::max(worst, scaled_max_diff(pcloud_conv(nb, hv, r),
                                            oracle::pcloud(m.vertices, queries, radius, hv,
                                                           r.coefficients, r.radial_constant)));
  }
  set_num_threads(before);
  return {worst < 1e-12 && search_mismatches == 0,
          format("100 instances: max scaled deviation %.1e (<1e-12), radius-search mismatches %d",
                 worst, search_mismatches)};
}

// 5 ---------------------------------------------------------------------------

Outcome decimation_contracts() {
  std::mt19937_64 rng(501);
  int contract_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const TriMesh m = trial % 4 == 3 ? oracle::random_small_mesh(rng)
                                     : random_grid_mesh(4 + trial % 9, 5 + trial % 7, rng, 0.3);
    const DecimationResult r = decimate(m, stride_target(m.num_vertices(), 2 + trial % 3));
    const ClusterMap& map = r.cluster_map;
    bool ok = map.num_input() == m.num_vertices() &&
              static_cast<std::size_t>(map.num_output) == r.mesh.num_vertices() &&
              r.removed_count == static_cast<int>(m.num_vertices()) - static_cast<int>(r.mesh.num_vertices());
    // Every input in exactly one non-empty cluster.
    std::vector<int> members(static_cast<std::size_t>(std::max(map.num_output, 0)), 0);
    for (int o : map.iomap) {
      if (o < 0 || o >= map.num_output) {
        ok = false;
      } else {
        ++members[static_cast<std::size_t>(o)];
      }
    }
    ok &= std::all_of(members.begin(), members.end(), [](int k) { return k > 0; });
    contract_failures += !ok;
  }

  // Hexagon a..f around g with pairs in the order of the worked example.
  enum { a, b, c, d, e, f, g };
  auto pair = [](int x, int y, double cost) { return VertexPair{std::min(x, y), std::max(x, y), cost}; };
  const std::vector<VertexPair> fan = {pair(c, d, 0.1), pair(a, g, 0.2), pair(e, f, 0.3),
                                       pair(a, b, 0.4), pair(b, g, 0.5), pair(b, c, 0.6),
                                       pair(d, e, 0.7), pair(f, a, 0.8), pair(c, g, 0.9),
                                       pair(d, g, 1.0), pair(e, g, 1.1), pair(f, g, 1.2)};
  const ClusterMap fan_map = cluster_vertices(fan, 4, 7);
  std::vector<std::set<int>> groups(static_cast<std::size_t>(fan_map.num_output));
  for (int i = 0; i < 7; ++i) groups[static_cast<std::size_t>(fan_map.iomap[static_cast<std::size_t>(i)])].insert(i);
  const bool example = std::set<std::set<int>>(groups.begin(), groups.end()) ==
                       std::set<std::set<int>>{{c, d}, {a, b, g}, {e, f}};

  TriMesh flat = random_grid_mesh(20, 20, rng);
  for (Vec3& p : flat.vertices) p.z() = 1.0;
  const double flat_cost = decimate(flat, stride_target(flat.num_vertices(), 4)).total_cost;

  int wins = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const TriMesh m = random_grid_mesh(8, 8, rng, 0.3);
    const auto q = vertex_quadrics(m);
    auto pairs = sorted_pairs(m, q);
    const int n = static_cast<int>(m.num_vertices());
    const ClusterMap greedy = cluster_vertices(pairs, n / 3, n);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    const ClusterMap shuffled = cluster_vertices(pairs, n - greedy.num_output, n);
    wins += shuffled.num_output == greedy.num_output &&
            clustering_cost(m, q, greedy) <= clustering_cost(m, q, shuffled);
  }
  return {contract_failures == 0 && example && flat_cost < 1e-8 && wins >= 95,
          format("contract failures %d/100, worked example %s, flat cost %.1e, greedy wins %d/100",
                 contract_failures, example ? "exact" : "WRONG", flat_cost, wins)};
}

// 6 ---------------------------------------------------------------------------

template <typename F>
double best_of(int repeats, F&& f) {
  double best = INFINITY;
  for (int i = 0; i < repeats; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

Outcome decimation_performance() {
  std::mt19937_64 rng(601);
  double ours[2], base[2];
  const std::size_t sizes[2] = {100000, 200000};
  for (int k = 0; k < 2; ++k) {
    const TriMesh m = random_mesh_with_edges(sizes[k], rng);
    const int target = stride_target(m.num_vertices(), 2);
    ours[k] = best_of(3, [&] { decimate(m, target); });
    base[k] = best_of(1, [&] { iterative_qem(m, target); });
  }
  const double r1 = ours[0] / base[0], r2 = ours[1] / base[1];
  const double growth = ours[1] / ours[0];
  return {r1 < 1.0 && r2 < 1.0 && growth < 2.5,
          format("|E|=1e5: %.0f ms vs %.0f ms (ratio %.2f); |E|=2e5: %.0f ms vs %.0f ms (ratio %.2f); "
                 "doubling x%.2f",
                 1e3 * ours[0], 1e3 * base[0], r1, 1e3 * ours[1], 1e3 * base[1], r2, growth)};
}

// 7 ---------------------------------------------------------------------------

Outcome rotation_split() {
  std::mt19937_64 rng(701);
  const TriMesh m = oracle::random_small_mesh(rng);
  TriMesh moved = m;
  const Eigen::Matrix3d rot = oracle::random_rotation(rng);
  const Vec3 shift(0.3, -1.0, 2.0);
  for (Vec3& p : moved.vertices) p = rot * p + shift;
  HarmonicFilter f = HarmonicFilter::zeros(3, 3);
  f.coefficients = random_matrix(16, 3, rng);
  const Matrix hv = random_matrix(static_cast<Eigen::Index>(m.num_vertices()), 3, rng);
  const Matrix hf = random_matrix(static_cast<Eigen::Index>(m.num_facets()), 3, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> colors(m.num_vertices());
  for (Vec3& c : colors) c = {u(rng), u(rng), u(rng)};
  const TextureField t1 = sample_texture(m, colors, 2, 1);
  const TextureField t2 = sample_texture(moved, colors, 2, 1);
  const Matrix kernel = random_matrix(48, 3, rng);
  const double v2f = (vertex2facet(m.facets, hv, f) - vertex2facet(moved.facets, hv, f)).cwiseAbs().maxCoeff();
  const double f2f = (facet2facet(t1, texture_basis(3, t1), kernel) -
                      facet2facet(t2, texture_basis(3, t2), kernel)).cwiseAbs().maxCoeff();
  const double f2v = (facet2vertex(m, hf, f) - facet2vertex(moved, hf, f)).cwiseAbs().maxCoeff();
  return {v2f < 1e-10 && f2f < 1e-10 && f2v > 1e-3,
          format("vertex2facet %.1e, facet2facet %.1e (<1e-10); facet2vertex %.3f (>1e-3)", v2f, f2f, f2v)};
}

// 8 ---------------------------------------------------------------------------

Outcome full_config_parameters() {
  const std::size_t n = Model(NetworkConfig::full(), 0).parameter_count();
  const double rel = std::abs(static_cast<double>(n) - 2.5e6) / 2.5e6;
  return {rel <= 0.2, format("%zu parameters, %.1f%% from 2.5M (<=20%%)", n, 100.0 * rel)};
}

// 9 and 10 ------------------------------------------------------------------

// Synthetic cube task: four motifs, 50 training and 10 test cubes per class.
constexpr int kCubeResolution = 7;
constexpr double kCubeDepth = 0.5;
constexpr int kEpochs = 60;
constexpr int kBatchSize = 4;

struct CubeRun {
  std::size_t parameters = 0;
  double accuracy = 0.0;
  double seconds = 0.0;
};

std::vector<Sample> cube_set(int per_class, std::uint64_t seed) {
  EngravingOptions options;
  options.resolution = kCubeResolution;
  options.depth = kCubeDepth;
  std::vector<Sample> data = synth_engraved_cubes(4, per_class, seed, options);
  for (Sample& s : data) s.mesh = normalize_shape(s.mesh);
  return data;
}

CubeRun run_cube_task(int degree) {
  static const std::vector<Sample> train_set = cube_set(50, 1);
  static const std::vector<Sample> test_set = cube_set(10, 2);
  const auto start = std::chrono::steady_clock::now();
  NetworkConfig config = NetworkConfig::desk();
  config.degree = degree;
  config.num_classes = 4;
  Model model(config, 7);
  TrainConfig tc;
  tc.epochs = kEpochs;
  tc.batch_size = kBatchSize;
  tc.seed = 3;
  tc.augment.rotation = RotationMode::kCubic;
  train(model, train_set, tc);
  CubeRun run;
  run.parameters = model.parameter_count();
  run.accuracy = evaluate(model, test_set).overall_accuracy;
  run.seconds = seconds_since(start);
  return run;
}

std::map<int, CubeRun>& cube_runs() {
  static std::map<int, CubeRun> runs;
  return runs;
}

const CubeRun& cube_run(int degree) {
  auto& runs = cube_runs();
  auto it = runs.find(degree);
  if (it == runs.end()) it = runs.emplace(degree, run_cube_task(degree)).first;
  return it->second;
}

Outcome cube_classification() {
  const CubeRun& r = cube_run(3);
  return {r.accuracy >= 0.9,
          format("test accuracy %.3f (>=0.90) after %d epochs, %.0f s", r.accuracy, kEpochs, r.seconds)};
}

Outcome degree_sweep() {
  std::string detail;
  bool monotone = true;
  std::size_t last = 0;
  for (int l = 0; l <= 3; ++l) {
    const CubeRun& r = cube_run(l);
    monotone &= r.parameters >= last;
    last = r.parameters;
    detail += format("%sL=%d: %zu params, acc %.3f", l ? "; " : "", l, r.parameters, r.accuracy);
  }
  return {monotone, detail};
}

// 11 --------------------------------------------------------------------------

Outcome pool_algebra() {
  std::mt19937_64 rng(1101);
  double ordering = 0.0, idempotence = 0.0, adjoint = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 60;
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const ClusterMap map = oracle::random_cluster_map(n, k, rng);
    const Matrix x = random_matrix(n, 3, rng);
    PoolContext avg_ctx, max_ctx;
    const Matrix avg = pool(x, map, PoolMode::kAverage, &avg_ctx);
    const Matrix mx = pool(x, map, PoolMode::kMax, &max_ctx);
    ordering = std::max(ordering, (avg - mx).maxCoeff());
    const Matrix once = unpool(avg, map);
    const Matrix twice = unpool(pool(once, map, PoolMode::kAverage), map);
    idempotence = std::max(idempotence, (once - twice).cwiseAbs().maxCoeff());
    const Matrix y = random_matrix(k, 3, rng);
    const Matrix z = random_matrix(n, 3, rng);
    adjoint = std::max(adjoint, std::abs(oracle::dot(unpool(y, map), z) -
                                         oracle::dot(y, unpool_backward(map, z))));
    adjoint = std::max(adjoint, std::abs(oracle::dot(avg, y) - oracle::dot(x, pool_backward(avg_ctx, y))));
    adjoint = std::max(adjoint, std::abs(oracle::dot(mx, y) - oracle::dot(x, pool_backward(max_ctx, y))));
  }
  return {ordering <= 0.0 && idempotence < 1e-12 && adjoint < 1e-10,
          format("1000 maps: max(avg - max) = %.1e, idempotence %.1e, adjoint %.1e", ordering,
                 idempotence, adjoint)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace meshkit

int main(int argc, char** argv) {
  using namespace meshkit;
  const std::vector<Criterion> criteria = {
      {1, "kernel size", kernel_size},
      {2, "harmonic orthogonality", gram_matrix},
      {3, "gradient suite", gradient_suite},
      {4, "oracle equivalence", oracle_equivalence},
      {5, "decimation contracts", decimation_contracts},
      {6, "decimation performance", decimation_performance},
      {7, "rotation split", rotation_split},
      {8, "full config parameter count", full_config_parameters},
      {9, "cube classification", cube_classification},
      {10, "degree sweep", degree_sweep},
      {11, "pool algebra", pool_algebra},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s [%2d] %-24s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
