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


// Differentiable ops recorded on a Tape. Geometry arguments are treated as
// constants and must outlive the tape's backward pass.

#pragma once

#include "meshkit/convolution.h"
#include "meshkit/pooling.h"
#include "meshkit/tape.h"

#include <span>

namespace meshkit::ops {

/// x W.
Var matmul(Tape& tape, Var x, Var weight);
/// x + b with a 1 x C row broadcast over rows.
Var add_bias(Tape& tape, Var x, Var bias);
Var add(Tape& tape, Var a, Var b);
/// Column-wise concatenation.
Var concat(Tape& tape, std::span<const Var> parts);
Var relu(Tape& tape, Var x);

struct BatchNormState {
  Matrix* running_mean;  // 1 x C
  Matrix* running_var;   // 1 x C
  double momentum = 0.9;
  double epsilon = 1e-5;
};

/// Per-channel normalization over rows. Training mode normalizes with batch
/// statistics and updates the running ones; evaluation mode uses the running
/// statistics.
Var batch_norm(Tape& tape, Var x, Var gamma, Var beta, BatchNormState state,
               bool training);

Var facet2vertex(Tape& tape, const VertexFacetAdjacency& adj,
                 std::span<const Facet> facets, const Matrix& facet_basis,
                 Var facet_features, Var coefficients);
Var vertex2facet(Tape& tape, const VertexFacetAdjacency& adj,
                 std::span<const Facet> facets, const Matrix& anchors,
                 Var vertex_features, Var coefficients);
/// Texture colors are data; only the kernel receives a gradient.
Var facet2facet(Tape& tape, const TextureField& texture,
                const Matrix& sample_basis, Var kernel);
Var pcloud_conv(Tape& tape, const NeighborList& neighbors,
                const PointPairGeometry& geometry, Var point_features,
                Var coefficients, Var radial_constant);

Var pool(Tape& tape, Var x, const ClusterMap& map, PoolMode mode);
Var unpool(Tape& tape, Var x, const ClusterMap& map);

/// Mean of the rows of each segment [offsets[s], offsets[s + 1]).
Var segment_mean(Tape& tape, Var x, std::span<const int> offsets);

/// Mean softmax cross-entropy of logit rows against class labels (1 x 1).
Var softmax_cross_entropy(Tape& tape, Var logits, std::span<const int> labels);

}  // namespace meshkit::ops
