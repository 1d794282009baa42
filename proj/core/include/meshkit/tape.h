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


// Reverse-mode differentiation over a closed set of matrix ops.
//
// A Tape owns every intermediate value of one forward pass. Each recorded op
// stores a closure that maps the gradient of its output to gradients of its
// inputs; Tape::backward replays the closures in reverse recording order.
// Closures may reference geometry owned by the caller, which must outlive
// the backward pass.

#pragma once

#include "meshkit/common.h"

#include <functional>
#include <string>
#include <vector>

namespace meshkit {

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  bool decay = true;  // subject to weight decay
};

/// Non-trainable tensor stored with the parameters (e.g. running statistics).
struct Buffer {
  std::string name;
  Matrix value;
};

class ParameterStore {
 public:
  int add(std::string name, Matrix value, bool decay = true);
  int add_buffer(std::string name, Matrix value);

  Parameter& operator[](int index) { return params_[static_cast<std::size_t>(index)]; }
  const Parameter& operator[](int index) const {
    return params_[static_cast<std::size_t>(index)];
  }
  Buffer& buffer(int index) { return buffers_[static_cast<std::size_t>(index)]; }
  const Buffer& buffer(int index) const { return buffers_[static_cast<std::size_t>(index)]; }

  std::vector<Parameter>& parameters() { return params_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  std::vector<Buffer>& buffers() { return buffers_; }
  const std::vector<Buffer>& buffers() const { return buffers_; }

  std::size_t count() const;  // total trainable scalars
  void zero_grad();

 private:
  std::vector<Parameter> params_;
  std::vector<Buffer> buffers_;
};

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

class Tape {
 public:
  using Backward = std::function<void(Tape&, const Matrix& upstream)>;

  explicit Tape(ParameterStore* store = nullptr) : store_(store) {}

  /// Constant input; receives no gradient.
  Var constant(Matrix value);
  /// Value of store parameter `index`; backward adds into its grad.
  Var parameter(int index);
  /// Records an op result. `backward` is called with the output gradient.
  Var record(Matrix value, bool requires_grad, Backward backward);

  const Matrix& value(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].value; }
  bool requires_grad(Var v) const {
    return nodes_[static_cast<std::size_t>(v.id)].requires_grad;
  }

  /// Adds `delta` to the gradient of `v` when it requires one.
  void accumulate(Var v, const Matrix& delta);

  /// Seeds d(root)/d(root) = 1 for a 1 x 1 root and runs every closure once,
  /// newest first.
  void backward(Var root);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    int parameter = -1;
    Backward backward;
  };

  ParameterStore* store_;
  std::vector<Node> nodes_;
};

}  // namespace meshkit
