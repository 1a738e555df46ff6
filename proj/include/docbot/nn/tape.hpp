// Copyright 2026 The docbot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "docbot/nn/parameters.hpp"
#include "docbot/nn/tensor.hpp"

namespace docbot::nn {

class Tape;

// Handle to a value recorded on a Tape. Cheap to copy; valid as long as
// the tape is alive.
class Var {
 public:
  Var() = default;

  const Tensor &value() const;
  const Shape &shape() const { return value().shape(); }
  Tape &tape() const { return *tape_; }
  uint32_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape *tape, uint32_t id) : tape_(tape), id_(id) {}

  Tape *tape_ = nullptr;
  uint32_t id_ = 0;
};

// Define-by-run record of differentiable operations. Nodes are appended in
// execution order; backward() walks them in exact reverse and accumulates
// into the gradient buffers of the bound Parameters.
class Tape {
 public:
  // With gradients disabled, ops skip recording their backward closures.
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var constant(Tensor value);
  // Leaf bound to `param`; its gradient lands in param.grad.
  Var parameter(Parameter &param);

  // `loss` must be a scalar on this tape. Gradients accumulate (+=) into
  // parameter buffers; intermediate gradients are released afterwards.
  void backward(Var loss);

  size_t size() const { return nodes_.size(); }
  bool grad_enabled() const { return grad_enabled_; }

  // Op implementation interface.
  using BackwardFn = std::function<void(Tape &, uint32_t self)>;
  Var record(Tensor value, std::span<const Var> inputs, BackwardFn fn);
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn fn) {
    return record(std::move(value), std::span<const Var>(inputs.begin(), inputs.size()),
                  std::move(fn));
  }
  const Tensor &value(uint32_t id) const { return nodes_[id].value; }
  const Tensor &grad(uint32_t id) const { return *nodes_[id].grad; }
  bool requires_grad(uint32_t id) const { return nodes_[id].requires_grad; }
  // Gradient accumulator for node `id`, zero-initialized on first use, or
  // nullptr when the node does not require a gradient.
  Tensor *accumulator(uint32_t id);

 private:
  friend class Var;

  struct Node {
    Tensor value;
    std::optional<Tensor> grad;
    bool requires_grad = false;
    Parameter *param = nullptr;
    BackwardFn backward;
  };

  std::vector<Node> nodes_;
  bool grad_enabled_;
};

inline const Tensor &Var::value() const { return tape_->value(id_); }

}  // namespace docbot::nn
