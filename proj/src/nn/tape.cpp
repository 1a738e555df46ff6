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

#include "docbot/nn/tape.hpp"

#include "docbot/error.hpp"

namespace docbot::nn {

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<uint32_t>(nodes_.size() - 1));
}

Var Tape::parameter(Parameter &param) {
  Node node;
  node.value = param.value;
  node.requires_grad = grad_enabled_;
  node.param = &param;
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<uint32_t>(nodes_.size() - 1));
}

Var Tape::record(Tensor value, std::span<const Var> inputs, BackwardFn fn) {
  Node node;
  node.value = std::move(value);
  if (grad_enabled_) {
    for (const Var &in : inputs) {
      if (&in.tape() != this) throw UsageError("operands recorded on different tapes");
      if (nodes_[in.id()].requires_grad) node.requires_grad = true;
    }
    if (node.requires_grad) node.backward = std::move(fn);
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<uint32_t>(nodes_.size() - 1));
}

Tensor *Tape::accumulator(uint32_t id) {
  Node &node = nodes_[id];
  if (!node.requires_grad) return nullptr;
  if (!node.grad) node.grad.emplace(node.value.shape(), 0.0);
  return &*node.grad;
}

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw UsageError("loss recorded on a different tape");
  if (loss.value().size() != 1 || loss.value().rank() != 0) {
    throw UsageError("backward needs a scalar loss, got shape " + loss.shape().str());
  }
  if (!grad_enabled_) throw UsageError("backward on a tape without gradients");
  Tensor *seed = accumulator(loss.id());
  if (!seed) return;  // loss does not depend on any parameter
  (*seed)[0] += 1.0;

  for (size_t i = loss.id() + 1; i-- > 0;) {
    Node &node = nodes_[i];
    if (!node.grad) continue;
    if (node.backward) node.backward(*this, static_cast<uint32_t>(i));
    if (node.param) {
      auto dst = node.param->grad.data();
      auto src = node.grad->data();
      for (size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
    node.grad.reset();
    node.backward = nullptr;
  }
}

}  // namespace docbot::nn
