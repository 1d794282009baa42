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

#include "meshkit/pooling.h"

#include "meshkit/parallel.h"

namespace meshkit {

using Eigen::Index;

Matrix pool(const Matrix& features, const ClusterMap& map, PoolMode mode,
            PoolContext* context) {
  if (features.rows() != static_cast<Index>(map.num_input())) {
    throw ArgumentError("pool: feature rows must equal cluster map inputs");
  }
  check_cluster_map(map);
  const ClusterMembers members = cluster_members(map);
  const Index c = features.cols();
  Matrix out(map.num_output, c);
  std::vector<int> argmax;
  if (mode == PoolMode::kMax) {
    argmax.resize(static_cast<std::size_t>(map.num_output) *
                  static_cast<std::size_t>(c));
  }
  parallel_for(static_cast<std::size_t>(map.num_output), [&](std::size_t o) {
    const auto group = members.of(static_cast<int>(o));
    auto row = out.row(static_cast<Index>(o));
    if (mode == PoolMode::kAverage) {
      row.setZero();
      for (int i : group) row += features.row(i);
      row /= static_cast<double>(group.size());
      return;
    }
    for (Index ch = 0; ch < c; ++ch) {
      int best = group[0];
      for (int i : group) {
        if (features(i, ch) > features(best, ch)) best = i;
      }
      row(ch) = features(best, ch);
      argmax[o * static_cast<std::size_t>(c) + static_cast<std::size_t>(ch)] =
          best;
    }
  });
  if (context != nullptr) {
    context->cluster_map = map;
    context->mode = mode;
    context->argmax = std::move(argmax);
    context->channels = c;
    context->valid = true;
  }
  return out;
}

Matrix unpool(const Matrix& features, const ClusterMap& map) {
  if (features.rows() != map.num_output) {
    throw ArgumentError("unpool: feature rows must equal cluster map outputs");
  }
  Matrix out(static_cast<Index>(map.num_input()), features.cols());
  parallel_for(map.num_input(), [&](std::size_t i) {
    out.row(static_cast<Index>(i)) = features.row(map.iomap[i]);
  });
  return out;
}

Matrix pool_backward(const PoolContext& context, const Matrix& upstream) {
  const ClusterMap& map = context.cluster_map;
  if (!context.valid) throw StateError("pool_backward: context was not saved");
  if (upstream.rows() != map.num_output || upstream.cols() != context.channels ||
      (context.mode == PoolMode::kMax &&
       context.argmax.size() != static_cast<std::size_t>(map.num_output) *
                                    static_cast<std::size_t>(context.channels))) {
    throw StateError("pool_backward: context does not match upstream shape");
  }
  const Index c = upstream.cols();
  Matrix out = Matrix::Zero(static_cast<Index>(map.num_input()), c);
  const ClusterMembers members = cluster_members(map);
  parallel_for(static_cast<std::size_t>(map.num_output), [&](std::size_t o) {
    const auto group = members.of(static_cast<int>(o));
    if (context.mode == PoolMode::kAverage) {
      const double inv = 1.0 / static_cast<double>(group.size());
      for (int i : group) out.row(i) = upstream.row(static_cast<Index>(o)) * inv;
      return;
    }
    // Rows of one cluster are written only by this iteration.
    for (Index ch = 0; ch < c; ++ch) {
      const int winner =
          context.argmax[o * static_cast<std::size_t>(c) + static_cast<std::size_t>(ch)];
      out(winner, ch) += upstream(static_cast<Index>(o), ch);
    }
  });
  return out;
}

Matrix unpool_backward(const ClusterMap& map, const Matrix& upstream) {
  if (upstream.rows() != static_cast<Index>(map.num_input())) {
    throw ArgumentError("unpool_backward: upstream rows must equal inputs");
  }
  const ClusterMembers members = cluster_members(map);
  Matrix out = Matrix::Zero(map.num_output, upstream.cols());
  parallel_for(static_cast<std::size_t>(map.num_output), [&](std::size_t o) {
    auto row = out.row(static_cast<Index>(o));
    for (int i : members.of(static_cast<int>(o))) row += upstream.row(i);
  });
  return out;
}

}  // namespace meshkit
