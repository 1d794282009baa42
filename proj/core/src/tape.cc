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


#include "meshkit/tape.h"

namespace meshkit {

int ParameterStore::add(std::string name, Matrix value, bool decay) {
  Parameter p;
  p.name = std::move(name);
  p.grad = Matrix::Zero(value.rows(), value.cols());
  p.value = std::move(value);
  p.decay = decay;
  params_.push_back(std::move(p));
  return static_cast<int>(params_.size()) - 1;
}

int ParameterStore::add_buffer(std::string name, Matrix value) {
  buffers_.push_back({std::move(name), std::move(value)});
  return static_cast<int>(buffers_.size()) - 1;
}

std::size_t ParameterStore::count() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void ParameterStore::zero_grad() {
  for (Parameter& p : params_) p.grad.setZero();
}

Var Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

Var Tape::parameter(int index) {
  if (store_ == nullptr) throw StateError("Tape: no parameter store attached");
  Node n;
  n.value = (*store_)[index].value;
  n.requires_grad = true;
  n.parameter = index;
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

Var Tape::record(Matrix value, bool requires_grad, Backward backward) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

void Tape::accumulate(Var v, const Matrix& delta) {
  Node& n = nodes_[static_cast<std::size_t>(v.id)];
  if (!n.requires_grad) return;
  if (delta.rows() != n.value.rows() || delta.cols() != n.value.cols()) {
    throw StateError("Tape: gradient shape does not match value shape");
  }
  if (n.grad.size() == 0) {
    n.grad = delta;
  } else {
    n.grad += delta;
  }
}

void Tape::backward(Var root) {
  Node& r = nodes_[static_cast<std::size_t>(root.id)];
  if (r.value.rows() != 1 || r.value.cols() != 1) {
    throw ArgumentError("Tape::backward: root must be a scalar");
  }
  if (!r.requires_grad) return;
  r.grad = Matrix::Ones(1, 1);
  for (int id = root.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.grad.size() == 0) continue;
    if (n.parameter >= 0) {
      (*store_)[n.parameter].grad += n.grad;
    } else if (n.backward) {
      const Matrix upstream = std::move(n.grad);
      n.backward(*this, upstream);
    }
    n.grad.resize(0, 0);
  }
}

}  // namespace meshkit
