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


// Text mesh formats (OFF, OBJ, ASCII PLY), dataset manifests and cluster map
// sidecars. Parsers report the 1-based line of the first offending token.

#pragma once

#include "meshkit/cluster_map.h"
#include "meshkit/mesh.h"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace meshkit {

enum class MeshFormat { kOff, kObj, kPly };

/// Format from the file extension (case-insensitive). Throws ArgumentError on
/// an unknown extension.
MeshFormat format_from_path(const std::filesystem::path& path);

struct LoadedMesh {
  TriMesh mesh;
  std::vector<Vec3> colors;  // empty or one RGB triple in [0, 1] per vertex
  ValidationReport report;
};

/// Polygons with more than three corners are fan-split from their first
/// corner. Throws ParseError on malformed input.
LoadedMesh parse_mesh(std::istream& in, MeshFormat format);
LoadedMesh load_mesh(const std::filesystem::path& path);
LoadedMesh load_mesh(const std::filesystem::path& path, MeshFormat format);

struct MeshWriteOptions {
  std::span<const Vec3> colors;
  std::span<const int> vertex_labels;  // PLY only
};

void write_mesh(std::ostream& out, const TriMesh& mesh, MeshFormat format,
                const MeshWriteOptions& options = {});
void save_mesh(const std::filesystem::path& path, const TriMesh& mesh,
               const MeshWriteOptions& options = {});

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

struct ManifestEntry {
  std::filesystem::path path;
  int label = 0;
};

/// Lines of `path<TAB>label`; blank lines and lines starting with '#' are
/// skipped. Relative paths are resolved against the manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path,
                    std::span<const ManifestEntry> entries);

/// One `cluster_id io_index` row per input vertex.
void write_cluster_map(std::ostream& out, const ClusterMap& map);
ClusterMap read_cluster_map(std::istream& in);

}  // namespace meshkit
