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

#include <span>
#include <vector>

#include "docbot/nn/tape.hpp"

// Differentiable primitives. Every op validates shapes before computing
// and throws ShapeError naming the offending shapes. Inputs are never
// modified.
namespace docbot::nn {

// [m,k]x[k,n] -> [m,n]; [m,k]x[k] -> [m]; [k]x[k,n] -> [n]; [k]x[k] -> [].
Var matmul(Var a, Var b);
Var transpose(Var a);

// Elementwise on equal shapes. `add` also accepts a rank-1 `b` matching
// the last dimension of a rank-2 `a` (row broadcast).
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double c);
Var one_minus(Var a);

Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);

// Over the last axis of a rank-1 or rank-2 input.
Var softmax(Var a);
Var log_softmax(Var a);

// Joins along `axis`; all other dimensions must agree.
Var concat(std::span<const Var> parts, size_t axis);
Var concat(std::initializer_list<Var> parts, size_t axis);
// New leading axis over equally shaped inputs.
Var stack(std::span<const Var> parts);

Var reshape(Var a, Shape shape);
Var row(Var a, size_t i);
// Zero-pads a rank-2 input on the bottom/right to [rows, cols].
Var pad2d(Var a, size_t rows, size_t cols);

// input [C,H,W], filters [F,C,KH,KW], bias [F] -> [F,H-KH+1,W-KW+1].
Var conv2d(Var input, Var filters, Var bias);
// input [C,H,W] -> [C,(H-window)/stride+1,(W-window)/stride+1].
Var maxpool2d(Var input, size_t window, size_t stride);

Var sum(Var a);
Var mean(Var a);

// Rows of `table` [V,E] for each id -> [T,E]. Throws DataError on an
// out-of-range id.
Var embedding_lookup(Var table, std::span<const int> ids);

// Numerically stable binary cross-entropy on a scalar logit.
Var bce_with_logits(Var logit, double label);
// -log softmax(logits)[target] on a rank-1 input.
Var cross_entropy(Var logits, size_t target);

}  // namespace docbot::nn
