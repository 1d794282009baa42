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


// Line-based checkpoint container:
//
//   meshkit-checkpoint 1
//   config <n>            followed by n `key = value` lines
//   tensor <kind> <name> <rows> <cols>
//   <rows lines of cols numbers>
//   end
//
// kind is `param` or `buffer`. Numbers use shortest round-trip formatting,
// so a save/load cycle is bit-exact.

#pragma once

#include "meshkit/model.h"

#include <filesystem>
#include <iosfwd>
#include <memory>

namespace meshkit {

inline constexpr int kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Model& model);
/// Atomic: writes a temporary sibling and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Model& model);

/// Rebuilds the model from the config echo and restores every tensor.
/// Throws ParseError on a malformed file or a tensor that does not match.
std::unique_ptr<Model> read_checkpoint(std::istream& in);
std::unique_ptr<Model> load_checkpoint(const std::filesystem::path& path);

}  // namespace meshkit
