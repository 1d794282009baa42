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

#include "meshkit/batch.h"
#include "meshkit/config.h"
#include "meshkit/convolution.h"
#include "meshkit/pooling.h"
#include "meshkit/tape.h"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace meshkit {

enum class Task { kClassification, kSegmentation };

/// Level 0 is the input resolution and hosts the initial layer; level b >= 1
/// is reached by decimating level b - 1 with strides[b - 1] and hosts encoder
/// block b. Per-level vectors (strides, repeats, decoder_channels) therefore
/// have depth - 1 entries.
struct NetworkConfig {
  std::vector<int> encoder_channels{16, 16, 32, 48, 64};
  std::vector<int> decoder_channels;  // segmentation only, coarsest first
  std::vector<double> strides{1, 2, 2, 2};
  std::vector<int> repeats{2, 2, 2, 2};
  int degree = 3;
  std::vector<int> dual_levels{4};
  std::vector<double> dual_radii{0.5};
  Task task = Task::kClassification;
  int num_classes = 4;
  bool use_height = false;
  bool textured = false;
  int texture_alpha = 2;
  int texture_beta = 1;
  double growth_ratio = 0.8;
  int classifier_hidden = 64;
  PoolMode pool_mode = PoolMode::kMax;
  int decimation_iters = 10;

  int depth() const { return static_cast<int>(encoder_channels.size()); }
  int growth(int level) const;
  /// Radius of `level` when it is dual, otherwise 0.
  double dual_radius(int level) const;

  /// Throws ArgumentError on inconsistent settings.
  void validate() const;

  static NetworkConfig desk();
  static NetworkConfig full();

  static NetworkConfig from_config(const KeyValueConfig& kv,
                                   const NetworkConfig& base = desk());
  std::string to_text() const;
  static std::vector<std::string> keys();
};

/// Geometry of one hierarchy level. `to_next` maps this level's vertices to
/// the next level (absent on the last level).
struct LevelGeometry {
  TriMesh mesh;
  VertexFacetAdjacency adjacency;
  Matrix normal_basis;
  std::vector<int> vertex_offsets;
  std::vector<int> facet_offsets;
  bool dual = false;
  NeighborList neighbors;
  PointPairGeometry pairs;
  ClusterMap to_next;
};

/// Everything the network reads from a batch: the mesh hierarchy, input
/// features and targets. Depends only on the samples and the config.
struct InputGeometry {
  std::vector<LevelGeometry> levels;
  Matrix geometrics;
  TextureField texture;
  Matrix texture_basis;
  Matrix anchors;
  std::vector<int> labels;
  std::vector<int> vertex_labels;

  std::size_t num_samples() const { return labels.size(); }
};

InputGeometry prepare_sample(const Sample& sample, const NetworkConfig& config);

/// Stacks prepared samples with index offsets, as if prepared as one batch.
InputGeometry stack_geometry(std::span<const InputGeometry* const> parts);

class Model {
 public:
  Model(NetworkConfig config, std::uint64_t seed);

  const NetworkConfig& config() const { return config_; }
  ParameterStore& store() { return store_; }
  const ParameterStore& store() const { return store_; }
  std::size_t parameter_count() const { return store_.count(); }

  /// Logits: one row per sample (classification) or per level-0 vertex.
  Var forward(Tape& tape, const InputGeometry& input, bool training);
  /// Level-0 vertex features of the initial layer before normalization.
  Var initial_layer(Tape& tape, const InputGeometry& input);
  /// Mean cross-entropy of `logits` against the input's targets.
  Var loss(Tape& tape, const InputGeometry& input, Var logits) const;

  std::span<const int> targets(const InputGeometry& input) const;

 private:
  struct Norm {
    int gamma, beta, mean, var;
  };
  struct Unit {
    int v2f;
    Norm facet_norm;
    int f2v, dense;
    Norm norm;
    bool dual = false;
    int pcloud, pcloud_c0, pcloud_dense;
    Norm pcloud_norm;
  };
  struct Block {
    std::vector<Unit> units;
    int transition;
    Norm norm;
  };
  struct Decoder {
    int dense;
    Norm norm;
  };

  Norm add_norm(const std::string& name, int channels);
  int add_dense(const std::string& name, int in, int out);
  int add_filter(const std::string& name, int channels);
  Var normalize(Tape& tape, Var x, const Norm& n, bool training);

  NetworkConfig config_;
  ParameterStore store_;
  std::mt19937_64 rng_;
  int init_dense_ = -1, init_texture_ = -1, init_f2v_ = -1;
  Norm init_norm_{};
  std::vector<Block> blocks_;
  std::vector<Decoder> decoders_;
  int head_w1_ = -1, head_b1_ = -1, head_w2_ = -1, head_b2_ = -1;
};

}  // namespace meshkit
