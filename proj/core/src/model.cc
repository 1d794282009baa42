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


#include "meshkit/model.h"

#include "meshkit/decimation.h"
#include "meshkit/layers.h"
#include "meshkit/synth.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace meshkit {

using Eigen::Index;

int NetworkConfig::growth(int level) const {
  const int c = encoder_channels[static_cast<std::size_t>(level)];
  return std::max(1, static_cast<int>(std::floor(growth_ratio * c)));
}

double NetworkConfig::dual_radius(int level) const {
  for (std::size_t i = 0; i < dual_levels.size(); ++i) {
    if (dual_levels[i] == level) return dual_radii[i];
  }
  return 0.0;
}

void NetworkConfig::validate() const {
  const int d = depth();
  if (d < 1) throw ArgumentError("config: encoder_channels is empty");
  for (int c : encoder_channels) {
    if (c < 1) throw ArgumentError("config: channel counts must be positive");
  }
  if (static_cast<int>(strides.size()) != d - 1) {
    throw ArgumentError("config: strides needs depth - 1 entries");
  }
  if (static_cast<int>(repeats.size()) != d - 1) {
    throw ArgumentError("config: repeats needs depth - 1 entries");
  }
  for (double s : strides) {
    if (!(s >= 1.0)) throw ArgumentError("config: strides must be >= 1");
  }
  for (int r : repeats) {
    if (r < 1) throw ArgumentError("config: repeats must be positive");
  }
  if (degree < 0 || degree > 12) throw ArgumentError("config: degree must be in [0, 12]");
  if (dual_levels.size() != dual_radii.size()) {
    throw ArgumentError("config: dual_radii needs one radius per dual level");
  }
  std::set<int> seen;
  for (std::size_t i = 0; i < dual_levels.size(); ++i) {
    if (dual_levels[i] < 1 || dual_levels[i] >= d || !seen.insert(dual_levels[i]).second) {
      throw ArgumentError("config: dual levels must be distinct block levels");
    }
    if (!(dual_radii[i] > 0.0)) throw ArgumentError("config: dual radii must be positive");
  }
  if (task == Task::kSegmentation) {
    if (static_cast<int>(decoder_channels.size()) != d - 1) {
      throw ArgumentError("config: decoder_channels needs depth - 1 entries");
    }
    for (int c : decoder_channels) {
      if (c < 1) throw ArgumentError("config: channel counts must be positive");
    }
  }
  if (num_classes < 1) throw ArgumentError("config: num_classes must be positive");
  if (!(growth_ratio > 0.0)) throw ArgumentError("config: growth_ratio must be positive");
  if (classifier_hidden < 1) throw ArgumentError("config: classifier_hidden must be positive");
  if (texture_alpha < 0 || texture_beta < 0) {
    throw ArgumentError("config: texture resolution must be non-negative");
  }
  if (decimation_iters < 1) throw ArgumentError("config: decimation_iters must be positive");
}

NetworkConfig NetworkConfig::desk() { return NetworkConfig{}; }

NetworkConfig NetworkConfig::full() {
  NetworkConfig c;
  c.encoder_channels = {32, 64, 96, 128, 192, 256};
  c.decoder_channels = {128, 128, 96, 96, 96};
  c.strides = {4, 3, 3, 2, 2};
  c.repeats = {2, 2, 4, 4, 4};
  c.degree = 3;
  c.dual_levels = {3, 4, 5};
  c.dual_radii = {0.2, 0.4, 0.8};
  c.task = Task::kSegmentation;
  c.num_classes = 13;
  c.use_height = true;
  c.textured = true;
  return c;
}

std::vector<std::string> NetworkConfig::keys() {
  return {"encoder_channels", "decoder_channels", "strides",        "repeats",
          "degree",           "dual_levels",      "dual_radii",     "task",
          "num_classes",      "use_height",       "textured",       "texture_alpha",
          "texture_beta",     "growth_ratio",     "classifier_hidden", "pool",
          "decimation_iters"};
}

NetworkConfig NetworkConfig::from_config(const KeyValueConfig& kv, const NetworkConfig& base) {
  NetworkConfig c = base;
  c.encoder_channels = kv.get_ints("encoder_channels", c.encoder_channels);
  c.decoder_channels = kv.get_ints("decoder_channels", c.decoder_channels);
  c.strides = kv.get_doubles("strides", c.strides);
  c.repeats = kv.get_ints("repeats", c.repeats);
  c.degree = kv.get_int("degree", c.degree);
  c.dual_levels = kv.get_ints("dual_levels", c.dual_levels);
  c.dual_radii = kv.get_doubles("dual_radii", c.dual_radii);
  const std::string task = kv.get_string(
      "task", c.task == Task::kClassification ? "classification" : "segmentation");
  if (task == "classification") {
    c.task = Task::kClassification;
  } else if (task == "segmentation") {
    c.task = Task::kSegmentation;
  } else {
    throw ArgumentError("config: task must be classification or segmentation");
  }
  c.num_classes = kv.get_int("num_classes", c.num_classes);
  c.use_height = kv.get_bool("use_height", c.use_height);
  c.textured = kv.get_bool("textured", c.textured);
  c.texture_alpha = kv.get_int("texture_alpha", c.texture_alpha);
  c.texture_beta = kv.get_int("texture_beta", c.texture_beta);
  c.growth_ratio = kv.get_double("growth_ratio", c.growth_ratio);
  c.classifier_hidden = kv.get_int("classifier_hidden", c.classifier_hidden);
  const std::string pool = kv.get_string("pool", c.pool_mode == PoolMode::kMax ? "max" : "avg");
  if (pool == "max") {
    c.pool_mode = PoolMode::kMax;
  } else if (pool == "avg") {
    c.pool_mode = PoolMode::kAverage;
  } else {
    throw ArgumentError("config: pool must be max or avg");
  }
  c.decimation_iters = kv.get_int("decimation_iters", c.decimation_iters);
  c.validate();
  return c;
}

namespace {

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream s;
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  return s.str();
}

}  // namespace

std::string NetworkConfig::to_text() const {
  std::ostringstream s;
  s.precision(17);
  s << "encoder_channels = " << join(encoder_channels) << '\n'
    << "decoder_channels = " << join(decoder_channels) << '\n'
    << "strides = " << join(strides) << '\n'
    << "repeats = " << join(repeats) << '\n'
    << "degree = " << degree << '\n'
    << "dual_levels = " << join(dual_levels) << '\n'
    << "dual_radii = " << join(dual_radii) << '\n'
    << "task = " << (task == Task::kClassification ? "classification" : "segmentation") << '\n'
    << "num_classes = " << num_classes << '\n'
    << "use_height = " << (use_height ? "true" : "false") << '\n'
    << "textured = " << (textured ? "true" : "false") << '\n'
    << "texture_alpha = " << texture_alpha << '\n'
    << "texture_beta = " << texture_beta << '\n'
    << "growth_ratio = " << growth_ratio << '\n'
    << "classifier_hidden = " << classifier_hidden << '\n'
    << "pool = " << (pool_mode == PoolMode::kMax ? "max" : "avg") << '\n'
    << "decimation_iters = " << decimation_iters << '\n';
  return s.str();
}

// -- geometry ----------------------------------------------------------------

namespace {

std::vector<Vec3> facet_normals(const TriMesh& mesh) {
  return compute_normals_areas(mesh).normals;
}

void finish_level(LevelGeometry& level, int degree) {
  level.adjacency = VertexFacetAdjacency::build(level.mesh.num_vertices(), level.mesh.facets);
  level.normal_basis = normal_basis(degree, facet_normals(level.mesh));
}

}  // namespace

InputGeometry prepare_sample(const Sample& sample, const NetworkConfig& config) {
  config.validate();
  if (sample.mesh.num_vertices() == 0) throw ArgumentError("prepare_sample: empty mesh");
  check_indices(sample.mesh);
  if (config.textured && !sample.textured()) {
    throw ArgumentError("prepare_sample: config expects textures");
  }
  if (config.task == Task::kSegmentation &&
      sample.vertex_labels.size() != sample.mesh.num_vertices()) {
    throw ArgumentError("prepare_sample: segmentation needs one label per vertex");
  }
  InputGeometry g;
  g.anchors = anchor_basis(config.degree);
  g.geometrics = compute_facet_geometrics(sample.mesh, config.use_height).features;
  if (config.textured) {
    g.texture = sample_texture(sample.mesh, sample.colors, config.texture_alpha,
                               config.texture_beta);
    g.texture_basis = texture_basis(config.degree, g.texture);
  }
  g.labels = {sample.label};
  g.vertex_labels = sample.vertex_labels;

  const int depth = config.depth();
  g.levels.resize(static_cast<std::size_t>(depth));
  g.levels[0].mesh = sample.mesh;
  for (int l = 0; l < depth; ++l) {
    LevelGeometry& level = g.levels[static_cast<std::size_t>(l)];
    if (l > 0) {
      LevelGeometry& prev = g.levels[static_cast<std::size_t>(l - 1)];
      const int target = stride_target(prev.mesh.num_vertices(),
                                       config.strides[static_cast<std::size_t>(l - 1)]);
      DecimationResult r = decimate(prev.mesh, target, config.decimation_iters);
      prev.to_next = std::move(r.cluster_map);
      level.mesh = std::move(r.mesh);
    }
    finish_level(level, config.degree);
    level.vertex_offsets = {0, static_cast<int>(level.mesh.num_vertices())};
    level.facet_offsets = {0, static_cast<int>(level.mesh.num_facets())};
    const double radius = config.dual_radius(l);
    if (radius > 0.0) {
      level.dual = true;
      level.neighbors = radius_search(level.mesh.vertices, level.mesh.vertices, radius);
      level.pairs = point_pair_geometry(level.neighbors, config.degree, radius);
    }
  }
  return g;
}

InputGeometry stack_geometry(std::span<const InputGeometry* const> parts) {
  if (parts.empty()) throw ArgumentError("stack_geometry: nothing to stack");
  if (parts.size() == 1) return *parts[0];
  const std::size_t depth = parts[0]->levels.size();
  InputGeometry g;
  g.anchors = parts[0]->anchors;
  const bool textured = parts[0]->texture.num_facets() > 0 || parts[0]->texture_basis.rows() > 0;

  Index geo_rows = 0, tex_rows = 0;
  for (const InputGeometry* p : parts) {
    if (p->levels.size() != depth) throw ArgumentError("stack_geometry: depth mismatch");
    geo_rows += p->geometrics.rows();
    tex_rows += p->texture_basis.rows();
  }
  g.geometrics.resize(geo_rows, parts[0]->geometrics.cols());
  g.texture_basis.resize(tex_rows, parts[0]->texture_basis.cols());
  g.texture.offsets.push_back(0);
  Index gr = 0, tr = 0;
  for (const InputGeometry* p : parts) {
    g.geometrics.middleRows(gr, p->geometrics.rows()) = p->geometrics;
    gr += p->geometrics.rows();
    if (textured) {
      g.texture_basis.middleRows(tr, p->texture_basis.rows()) = p->texture_basis;
      tr += p->texture_basis.rows();
      const std::size_t base = g.texture.colors.size();
      g.texture.colors.insert(g.texture.colors.end(), p->texture.colors.begin(),
                              p->texture.colors.end());
      g.texture.barycentric.insert(g.texture.barycentric.end(), p->texture.barycentric.begin(),
                                   p->texture.barycentric.end());
      for (std::size_t f = 1; f < p->texture.offsets.size(); ++f) {
        g.texture.offsets.push_back(base + p->texture.offsets[f]);
      }
    }
    g.labels.insert(g.labels.end(), p->labels.begin(), p->labels.end());
    g.vertex_labels.insert(g.vertex_labels.end(), p->vertex_labels.begin(),
                           p->vertex_labels.end());
  }
  if (!textured) g.texture.offsets.clear();

  g.levels.resize(depth);
  for (std::size_t l = 0; l < depth; ++l) {
    LevelGeometry& out = g.levels[l];
    out.dual = parts[0]->levels[l].dual;
    out.vertex_offsets = {0};
    out.facet_offsets = {0};
    Index basis_rows = 0, pair_rows = 0;
    for (const InputGeometry* p : parts) {
      basis_rows += p->levels[l].normal_basis.rows();
      pair_rows += p->levels[l].pairs.basis.rows();
    }
    out.normal_basis.resize(basis_rows, parts[0]->levels[l].normal_basis.cols());
    if (out.dual) {
      out.pairs.radius = parts[0]->levels[l].pairs.radius;
      out.pairs.basis.resize(pair_rows, parts[0]->levels[l].pairs.basis.cols());
      out.neighbors.offsets.push_back(0);
    }
    Index br = 0, pr = 0;
    const bool has_next = l + 1 < depth;
    for (const InputGeometry* p : parts) {
      const LevelGeometry& in = p->levels[l];
      const int base = out.vertex_offsets.back();
      out.mesh.vertices.insert(out.mesh.vertices.end(), in.mesh.vertices.begin(),
                               in.mesh.vertices.end());
      for (const Facet& f : in.mesh.facets) {
        out.mesh.facets.push_back({f[0] + base, f[1] + base, f[2] + base});
      }
      out.normal_basis.middleRows(br, in.normal_basis.rows()) = in.normal_basis;
      br += in.normal_basis.rows();
      if (out.dual) {
        const int pair_base = static_cast<int>(out.neighbors.indices.size());
        for (std::size_t q = 1; q < in.neighbors.offsets.size(); ++q) {
          out.neighbors.offsets.push_back(pair_base + in.neighbors.offsets[q]);
        }
        for (int i : in.neighbors.indices) out.neighbors.indices.push_back(i + base);
        out.neighbors.displacements.insert(out.neighbors.displacements.end(),
                                           in.neighbors.displacements.begin(),
                                           in.neighbors.displacements.end());
        out.neighbors.distances.insert(out.neighbors.distances.end(),
                                       in.neighbors.distances.begin(),
                                       in.neighbors.distances.end());
        out.pairs.basis.middleRows(pr, in.pairs.basis.rows()) = in.pairs.basis;
        pr += in.pairs.basis.rows();
        out.pairs.z.insert(out.pairs.z.end(), in.pairs.z.begin(), in.pairs.z.end());
      }
      if (has_next) {
        const int next_base = out.to_next.num_output;
        for (int c : in.to_next.vcluster) out.to_next.vcluster.push_back(c + next_base);
        for (int c : in.to_next.iomap) out.to_next.iomap.push_back(c + next_base);
        out.to_next.num_output += in.to_next.num_output;
      }
      out.vertex_offsets.push_back(base + static_cast<int>(in.mesh.num_vertices()));
      out.facet_offsets.push_back(out.facet_offsets.back() +
                                  static_cast<int>(in.mesh.num_facets()));
    }
    out.adjacency = VertexFacetAdjacency::build(out.mesh.num_vertices(), out.mesh.facets);
  }
  return g;
}

// -- model -------------------------------------------------------------------

Model::Norm Model::add_norm(const std::string& name, int channels) {
  Norm n;
  n.gamma = store_.add(name + ".gamma", Matrix::Ones(1, channels), false);
  n.beta = store_.add(name + ".beta", Matrix::Zero(1, channels), false);
  n.mean = store_.add_buffer(name + ".running_mean", Matrix::Zero(1, channels));
  n.var = store_.add_buffer(name + ".running_var", Matrix::Ones(1, channels));
  return n;
}

int Model::add_dense(const std::string& name, int in, int out) {
  std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / in));
  Matrix w(in, out);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng_);
  return store_.add(name, std::move(w));
}

int Model::add_filter(const std::string& name, int channels) {
  const int t = basis_size(config_.degree);
  std::normal_distribution<double> normal(0.0, 0.1);
  Matrix c(t, channels);
  for (Index i = 0; i < c.size(); ++i) c.data()[i] = normal(rng_);
  c.row(0).array() += 1.0;
  return store_.add(name, std::move(c));
}

Model::Model(NetworkConfig config, std::uint64_t seed)
    : config_(std::move(config)), rng_(stream_engine(seed, 0x6d6f64656cULL)) {
  config_.validate();
  const int depth = config_.depth();
  const int c0 = config_.encoder_channels[0];
  const int t = basis_size(config_.degree);

  init_dense_ = add_dense("init.dense", geometric_feature_count(config_.use_height), c0);
  if (config_.textured) {
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / (3.0 * t)));
    Matrix k(3 * t, c0);
    for (Index i = 0; i < k.size(); ++i) k.data()[i] = normal(rng_);
    init_texture_ = store_.add("init.facet2facet", std::move(k));
  }
  init_f2v_ = add_filter("init.facet2vertex", c0);
  init_norm_ = add_norm("init.bn", c0);

  int width = c0;
  for (int b = 1; b < depth; ++b) {
    const std::string prefix = "enc" + std::to_string(b);
    const int g = config_.growth(b);
    const bool dual = config_.dual_radius(b) > 0.0;
    Block block;
    int cx = width;
    for (int r = 0; r < config_.repeats[static_cast<std::size_t>(b - 1)]; ++r) {
      const std::string u = prefix + ".unit" + std::to_string(r);
      Unit unit;
      unit.v2f = add_filter(u + ".vertex2facet", cx);
      unit.facet_norm = add_norm(u + ".facet_bn", cx);
      unit.f2v = add_filter(u + ".facet2vertex", cx);
      unit.dense = add_dense(u + ".dense", cx, g);
      unit.norm = add_norm(u + ".bn", g);
      unit.dual = dual;
      if (dual) {
        unit.pcloud = add_filter(u + ".pcloud", cx);
        unit.pcloud_c0 = store_.add(u + ".pcloud_c0", Matrix::Ones(1, cx));
        unit.pcloud_dense = add_dense(u + ".pcloud_dense", cx, g);
        unit.pcloud_norm = add_norm(u + ".pcloud_bn", g);
      }
      block.units.push_back(unit);
      cx += g;
    }
    const int cb = config_.encoder_channels[static_cast<std::size_t>(b)];
    block.transition = add_dense(prefix + ".transition", cx, cb);
    block.norm = add_norm(prefix + ".transition_bn", cb);
    blocks_.push_back(std::move(block));
    width = cb;
  }

  if (config_.task == Task::kClassification) {
    const int h = config_.classifier_hidden;
    head_w1_ = add_dense("head.fc1", width, h);
    head_b1_ = store_.add("head.fc1_bias", Matrix::Zero(1, h), false);
    head_w2_ = add_dense("head.fc2", h, config_.num_classes);
    head_b2_ = store_.add("head.fc2_bias", Matrix::Zero(1, config_.num_classes), false);
  } else {
    for (int k = 0; k + 1 < depth; ++k) {
      const int level = depth - 2 - k;  // destination level of this stage
      const int skip = config_.encoder_channels[static_cast<std::size_t>(level)];
      const int out = config_.decoder_channels[static_cast<std::size_t>(k)];
      const std::string prefix = "dec" + std::to_string(k);
      Decoder d;
      d.dense = add_dense(prefix + ".dense", width + skip, out);
      d.norm = add_norm(prefix + ".bn", out);
      decoders_.push_back(d);
      width = out;
    }
    head_w2_ = add_dense("head.out", width, config_.num_classes);
    head_b2_ = store_.add("head.out_bias", Matrix::Zero(1, config_.num_classes), false);
  }
}

Var Model::normalize(Tape& tape, Var x, const Norm& n, bool training) {
  ops::BatchNormState state{&store_.buffer(n.mean).value, &store_.buffer(n.var).value};
  return ops::batch_norm(tape, x, tape.parameter(n.gamma), tape.parameter(n.beta), state,
                         training);
}

Var Model::initial_layer(Tape& tape, const InputGeometry& input) {
  if (input.geometrics.cols() != geometric_feature_count(config_.use_height)) {
    throw ArgumentError("initial_layer: geometric features missing or misshaped");
  }
  const LevelGeometry& l0 = input.levels.front();
  Var h = ops::matmul(tape, tape.constant(input.geometrics), tape.parameter(init_dense_));
  if (config_.textured) {
    Var tex = ops::facet2facet(tape, input.texture, input.texture_basis,
                               tape.parameter(init_texture_));
    h = ops::add(tape, h, tex);
  }
  return ops::facet2vertex(tape, l0.adjacency, l0.mesh.facets, l0.normal_basis, h,
                           tape.parameter(init_f2v_));
}

Var Model::forward(Tape& tape, const InputGeometry& input, bool training) {
  const int depth = config_.depth();
  if (static_cast<int>(input.levels.size()) != depth) {
    throw ArgumentError("forward: geometry depth does not match the config");
  }
  Var v = ops::relu(tape, normalize(tape, initial_layer(tape, input), init_norm_, training));
  std::vector<Var> skips{v};
  for (int b = 1; b < depth; ++b) {
    const LevelGeometry& prev = input.levels[static_cast<std::size_t>(b - 1)];
    const LevelGeometry& level = input.levels[static_cast<std::size_t>(b)];
    v = ops::pool(tape, v, prev.to_next, config_.pool_mode);
    const Block& block = blocks_[static_cast<std::size_t>(b - 1)];
    Var x = v;
    for (const Unit& unit : block.units) {
      Var f = ops::vertex2facet(tape, level.adjacency, level.mesh.facets, input.anchors, x,
                                tape.parameter(unit.v2f));
      f = ops::relu(tape, normalize(tape, f, unit.facet_norm, training));
      Var u = ops::facet2vertex(tape, level.adjacency, level.mesh.facets, level.normal_basis,
                                f, tape.parameter(unit.f2v));
      u = ops::matmul(tape, u, tape.parameter(unit.dense));
      Var y = ops::relu(tape, normalize(tape, u, unit.norm, training));
      if (unit.dual) {
        Var p = ops::pcloud_conv(tape, level.neighbors, level.pairs, x,
                                 tape.parameter(unit.pcloud), tape.parameter(unit.pcloud_c0));
        p = ops::matmul(tape, p, tape.parameter(unit.pcloud_dense));
        y = ops::add(tape, y, ops::relu(tape, normalize(tape, p, unit.pcloud_norm, training)));
      }
      const Var parts[] = {x, y};
      x = ops::concat(tape, parts);
    }
    x = ops::matmul(tape, x, tape.parameter(block.transition));
    v = ops::relu(tape, normalize(tape, x, block.norm, training));
    skips.push_back(v);
  }

  if (config_.task == Task::kClassification) {
    Var g = ops::segment_mean(tape, v, input.levels.back().vertex_offsets);
    g = ops::add_bias(tape, ops::matmul(tape, g, tape.parameter(head_w1_)),
                      tape.parameter(head_b1_));
    g = ops::relu(tape, g);
    return ops::add_bias(tape, ops::matmul(tape, g, tape.parameter(head_w2_)),
                         tape.parameter(head_b2_));
  }
  for (int k = 0; k + 1 < depth; ++k) {
    const int level = depth - 2 - k;
    v = ops::unpool(tape, v, input.levels[static_cast<std::size_t>(level)].to_next);
    const Var parts[] = {v, skips[static_cast<std::size_t>(level)]};
    v = ops::concat(tape, parts);
    const Decoder& d = decoders_[static_cast<std::size_t>(k)];
    v = ops::matmul(tape, v, tape.parameter(d.dense));
    v = ops::relu(tape, normalize(tape, v, d.norm, training));
  }
  return ops::add_bias(tape, ops::matmul(tape, v, tape.parameter(head_w2_)),
                       tape.parameter(head_b2_));
}

std::span<const int> Model::targets(const InputGeometry& input) const {
  if (config_.task == Task::kClassification) return input.labels;
  return input.vertex_labels;
}

Var Model::loss(Tape& tape, const InputGeometry& input, Var logits) const {
  return ops::softmax_cross_entropy(tape, logits, targets(input));
}

}  // namespace meshkit
