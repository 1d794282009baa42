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


#include "meshkit/layers.h"

#include <cmath>
#include <memory>

namespace meshkit::ops {

using Eigen::Index;

Var matmul(Tape& tape, Var x, Var weight) {
  const Matrix& xv = tape.value(x);
  const Matrix& wv = tape.value(weight);
  if (xv.cols() != wv.rows()) throw ArgumentError("matmul: inner dimensions differ");
  const bool rg = tape.requires_grad(x) || tape.requires_grad(weight);
  return tape.record(xv * wv, rg, [x, weight](Tape& t, const Matrix& up) {
    if (t.requires_grad(x)) t.accumulate(x, up * t.value(weight).transpose());
    if (t.requires_grad(weight)) t.accumulate(weight, t.value(x).transpose() * up);
  });
}

Var add_bias(Tape& tape, Var x, Var bias) {
  const Matrix& xv = tape.value(x);
  const Matrix& bv = tape.value(bias);
  if (bv.rows() != 1 || bv.cols() != xv.cols()) {
    throw ArgumentError("add_bias: bias must be 1 x C");
  }
  Matrix out = xv.rowwise() + bv.row(0);
  const bool rg = tape.requires_grad(x) || tape.requires_grad(bias);
  return tape.record(std::move(out), rg, [x, bias](Tape& t, const Matrix& up) {
    t.accumulate(x, up);
    t.accumulate(bias, up.colwise().sum());
  });
}

Var add(Tape& tape, Var a, Var b) {
  const Matrix& av = tape.value(a);
  const Matrix& bv = tape.value(b);
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    throw ArgumentError("add: shapes differ");
  }
  const bool rg = tape.requires_grad(a) || tape.requires_grad(b);
  return tape.record(av + bv, rg, [a, b](Tape& t, const Matrix& up) {
    t.accumulate(a, up);
    t.accumulate(b, up);
  });
}

Var concat(Tape& tape, std::span<const Var> parts) {
  if (parts.empty()) throw ArgumentError("concat: nothing to concatenate");
  const Index rows = tape.value(parts[0]).rows();
  Index cols = 0;
  bool rg = false;
  for (Var p : parts) {
    if (tape.value(p).rows() != rows) throw ArgumentError("concat: row counts differ");
    cols += tape.value(p).cols();
    rg = rg || tape.requires_grad(p);
  }
  Matrix out(rows, cols);
  Index c = 0;
  for (Var p : parts) {
    const Matrix& v = tape.value(p);
    out.middleCols(c, v.cols()) = v;
    c += v.cols();
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return tape.record(std::move(out), rg, [saved](Tape& t, const Matrix& up) {
    Index c = 0;
    for (Var p : saved) {
      const Index w = t.value(p).cols();
      if (t.requires_grad(p)) t.accumulate(p, up.middleCols(c, w));
      c += w;
    }
  });
}

Var relu(Tape& tape, Var x) {
  Matrix out = tape.value(x).cwiseMax(0.0);
  return tape.record(std::move(out), tape.requires_grad(x), [x](Tape& t, const Matrix& up) {
    const Matrix& xv = t.value(x);
    t.accumulate(x, (xv.array() > 0.0).select(up, 0.0));
  });
}

Var batch_norm(Tape& tape, Var x, Var gamma, Var beta, BatchNormState state,
               bool training) {
  const Matrix& xv = tape.value(x);
  const Index n = xv.rows();
  const Index c = xv.cols();
  const RowVector g = tape.value(gamma).row(0);
  const RowVector b = tape.value(beta).row(0);
  if (g.size() != c || b.size() != c) throw ArgumentError("batch_norm: channel mismatch");
  RowVector mean;
  RowVector var;
  if (training && n > 0) {
    mean = xv.colwise().mean();
    var = (xv.rowwise() - mean).array().square().colwise().mean();
    *state.running_mean = state.momentum * *state.running_mean + (1.0 - state.momentum) * mean;
    *state.running_var = state.momentum * *state.running_var + (1.0 - state.momentum) * var;
  } else {
    // An empty batch carries no statistics; the running ones stay untouched.
    mean = state.running_mean->row(0);
    var = state.running_var->row(0);
  }
  const RowVector inv_std = (var.array() + state.epsilon).rsqrt().matrix();
  auto xhat = std::make_shared<Matrix>((xv.rowwise() - mean).array().rowwise() * inv_std.array());
  Matrix out = (xhat->array().rowwise() * g.array()).rowwise() + b.array();
  const bool rg = tape.requires_grad(x) || tape.requires_grad(gamma) || tape.requires_grad(beta);
  const bool batch_stats = training && n > 0;
  return tape.record(std::move(out), rg,
                     [x, gamma, beta, xhat, inv_std, g, training = batch_stats](Tape& t, const Matrix& up) {
    const RowVector dbeta = up.colwise().sum();
    const RowVector dgamma = up.cwiseProduct(*xhat).colwise().sum();
    t.accumulate(beta, dbeta);
    t.accumulate(gamma, dgamma);
    if (!t.requires_grad(x)) return;
    const RowVector scale = g.cwiseProduct(inv_std);
    if (!training || up.rows() == 0) {
      t.accumulate(x, up.array().rowwise() * scale.array());
      return;
    }
    const double rows = static_cast<double>(up.rows());
    Matrix dx = (up.rowwise() - dbeta / rows) -
                (xhat->array().rowwise() * (dgamma / rows).array()).matrix();
    dx.array().rowwise() *= scale.array();
    t.accumulate(x, dx);
  });
}

Var facet2vertex(Tape& tape, const VertexFacetAdjacency& adj,
                 std::span<const Facet> facets, const Matrix& facet_basis,
                 Var facet_features, Var coefficients) {
  Matrix out = meshkit::facet2vertex(adj, facet_basis, tape.value(facet_features),
                                     tape.value(coefficients));
  const bool rg = tape.requires_grad(facet_features) || tape.requires_grad(coefficients);
  return tape.record(std::move(out), rg,
                     [&adj, facets, &facet_basis, facet_features, coefficients](
                         Tape& t, const Matrix& up) {
    ConvGrads g = facet2vertex_backward(adj, facets, facet_basis, t.value(facet_features),
                                        t.value(coefficients), up);
    t.accumulate(facet_features, g.input);
    t.accumulate(coefficients, g.coefficients);
  });
}

Var vertex2facet(Tape& tape, const VertexFacetAdjacency& adj,
                 std::span<const Facet> facets, const Matrix& anchors,
                 Var vertex_features, Var coefficients) {
  Matrix out = meshkit::vertex2facet(facets, anchors, tape.value(vertex_features),
                                     tape.value(coefficients));
  const bool rg = tape.requires_grad(vertex_features) || tape.requires_grad(coefficients);
  return tape.record(std::move(out), rg,
                     [&adj, facets, &anchors, vertex_features, coefficients](
                         Tape& t, const Matrix& up) {
    ConvGrads g = vertex2facet_backward(adj, facets, anchors, t.value(vertex_features),
                                        t.value(coefficients), up);
    t.accumulate(vertex_features, g.input);
    t.accumulate(coefficients, g.coefficients);
  });
}

Var facet2facet(Tape& tape, const TextureField& texture,
                const Matrix& sample_basis, Var kernel) {
  Matrix out = meshkit::facet2facet(texture, sample_basis, tape.value(kernel));
  return tape.record(std::move(out), tape.requires_grad(kernel),
                     [&texture, &sample_basis, kernel](Tape& t, const Matrix& up) {
    ConvGrads g = facet2facet_backward(texture, sample_basis, t.value(kernel), up);
    t.accumulate(kernel, g.coefficients);
  });
}

Var pcloud_conv(Tape& tape, const NeighborList& neighbors,
                const PointPairGeometry& geometry, Var point_features,
                Var coefficients, Var radial_constant) {
  Matrix out = meshkit::pcloud_conv(neighbors, geometry, tape.value(point_features),
                                    tape.value(coefficients),
                                    tape.value(radial_constant).row(0));
  const bool rg = tape.requires_grad(point_features) || tape.requires_grad(coefficients) ||
                  tape.requires_grad(radial_constant);
  return tape.record(std::move(out), rg,
                     [&neighbors, &geometry, point_features, coefficients, radial_constant](
                         Tape& t, const Matrix& up) {
    ConvGrads g = pcloud_conv_backward(neighbors, geometry, t.value(point_features),
                                       t.value(coefficients),
                                       t.value(radial_constant).row(0), up);
    t.accumulate(point_features, g.input);
    t.accumulate(coefficients, g.coefficients);
    t.accumulate(radial_constant, Matrix(g.radial_constant));
  });
}

Var pool(Tape& tape, Var x, const ClusterMap& map, PoolMode mode) {
  auto context = std::make_shared<PoolContext>();
  Matrix out = meshkit::pool(tape.value(x), map, mode, context.get());
  return tape.record(std::move(out), tape.requires_grad(x), [x, context](Tape& t, const Matrix& up) {
    t.accumulate(x, pool_backward(*context, up));
  });
}

Var unpool(Tape& tape, Var x, const ClusterMap& map) {
  Matrix out = meshkit::unpool(tape.value(x), map);
  return tape.record(std::move(out), tape.requires_grad(x), [x, &map](Tape& t, const Matrix& up) {
    t.accumulate(x, unpool_backward(map, up));
  });
}

Var segment_mean(Tape& tape, Var x, std::span<const int> offsets) {
  const Matrix& xv = tape.value(x);
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != xv.rows()) {
    throw ArgumentError("segment_mean: offsets do not cover the rows");
  }
  const Index segments = static_cast<Index>(offsets.size()) - 1;
  Matrix out = Matrix::Zero(segments, xv.cols());
  for (Index s = 0; s < segments; ++s) {
    const int begin = offsets[static_cast<std::size_t>(s)];
    const int end = offsets[static_cast<std::size_t>(s) + 1];
    if (end <= begin) throw ArgumentError("segment_mean: empty segment");
    out.row(s) = xv.middleRows(begin, end - begin).colwise().mean();
  }
  std::vector<int> saved(offsets.begin(), offsets.end());
  return tape.record(std::move(out), tape.requires_grad(x), [x, saved](Tape& t, const Matrix& up) {
    Matrix dx(t.value(x).rows(), up.cols());
    for (std::size_t s = 0; s + 1 < saved.size(); ++s) {
      const int len = saved[s + 1] - saved[s];
      dx.middleRows(saved[s], len).rowwise() = up.row(static_cast<Index>(s)) / len;
    }
    t.accumulate(x, dx);
  });
}

Var softmax_cross_entropy(Tape& tape, Var logits, std::span<const int> labels) {
  const Matrix& z = tape.value(logits);
  if (static_cast<std::size_t>(z.rows()) != labels.size() || z.rows() == 0) {
    throw ArgumentError("softmax_cross_entropy: one label per row required");
  }
  auto prob = std::make_shared<Matrix>(z.rows(), z.cols());
  double loss = 0.0;
  for (Index i = 0; i < z.rows(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    if (y < 0 || y >= z.cols()) throw ArgumentError("softmax_cross_entropy: label out of range");
    const double m = z.row(i).maxCoeff();
    const RowVector e = (z.row(i).array() - m).exp().matrix();
    const double s = e.sum();
    prob->row(i) = e / s;
    loss += std::log(s) + m - z(i, y);
  }
  const double n = static_cast<double>(z.rows());
  Matrix out(1, 1);
  out(0, 0) = loss / n;
  std::vector<int> saved(labels.begin(), labels.end());
  return tape.record(std::move(out), tape.requires_grad(logits),
                     [logits, prob, saved, n](Tape& t, const Matrix& up) {
    Matrix d = *prob;
    for (std::size_t i = 0; i < saved.size(); ++i) d(static_cast<Index>(i), saved[i]) -= 1.0;
    t.accumulate(logits, d * (up(0, 0) / n));
  });
}

}  // namespace meshkit::ops
