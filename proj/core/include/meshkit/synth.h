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
#include "meshkit/mesh.h"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace meshkit {

/// Unit-radius icosphere; `subdivisions` midpoint splits of the icosahedron
/// give 10 * 4^s + 2 vertices.
TriMesh icosphere(int subdivisions);

/// Cube [-1, 1]^3 with every face split into n x n quads of two triangles;
/// 6 n^2 + 2 vertices, outward winding.
TriMesh subdivided_cube(int n);

/// Height field over a rows x cols lattice with random diagonals and
/// jittered positions. Always edge-manifold.
TriMesh random_grid_mesh(int rows, int cols, std::mt19937_64& rng,
                         double jitter = 0.3);

/// Random grid mesh with roughly `num_edges` unique edges.
TriMesh random_mesh_with_edges(std::size_t num_edges, std::mt19937_64& rng);

/// Names of the available engraving motifs, in class order.
const std::vector<std::string>& engraving_motifs();

struct EngravingOptions {
  int resolution = 7;   // quads per cube face edge
  double depth = 0.5;   // depression depth in face half-widths
};

/// Cubes with one motif depressed into a random face at a random offset,
/// rotation and scale. Class c uses motif c. Sample i of class c draws from
/// an engine seeded with {seed, c * per_class + i}, so the output is a pure
/// function of the arguments. Throws ArgumentError when n_classes exceeds the
/// motif count.
std::vector<Sample> synth_engraved_cubes(int n_classes, int per_class,
                                         std::uint64_t seed,
                                         const EngravingOptions& options = {});

/// Translates the vertex centroid to the origin and scales the largest vertex
/// norm to 1.
TriMesh normalize_shape(const TriMesh& mesh);

/// kCubic draws one of the 24 rotations mapping the coordinate axes onto
/// themselves.
enum class RotationMode { kNone, kAxisZ, kCubic, kFree };

struct AugmentConfig {
  bool flip = false;          // random sign on x and y
  double scale_min = 1.0;
  double scale_max = 1.0;     // per-axis factor drawn from [min, max]
  double shift = 0.0;         // per-axis offset drawn from [-shift, shift]
  RotationMode rotation = RotationMode::kNone;
  double vertex_dropout = 0.0;
  double facet_dropout = 0.0;
  double color_jitter = 0.0;  // per-channel offset drawn from [-j, j]

  bool identity() const;
};

/// Random rigid/affine jitter and dropout. Dropout that would leave fewer
/// than 4 vertices is skipped for that sample.
Sample augment(const Sample& sample, const AugmentConfig& config,
               std::mt19937_64& rng);

/// Engine for stream `index` under `seed`.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index);

}  // namespace meshkit
