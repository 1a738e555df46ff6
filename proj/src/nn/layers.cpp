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

#include "docbot/nn/layers.hpp"

#include <cmath>

#include "docbot/error.hpp"

namespace docbot::nn {

Tensor xavier_uniform(size_t fan_in, size_t fan_out, Rng &rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(Shape{fan_in, fan_out});
  for (double &v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

Var linear(Var x, Var w, Var b) { return add(matmul(x, w), b); }

void add_gru_params(ParameterSet &params, const std::string &prefix, size_t input,
                    size_t hidden, Rng &rng) {
  for (const char *gate : {"z", "r", "h"}) {
    params.add(prefix + ".w" + gate, xavier_uniform(input, hidden, rng));
  }
  for (const char *gate : {"z", "r", "h"}) {
    params.add(prefix + ".u" + gate, xavier_uniform(hidden, hidden, rng));
  }
  for (const char *gate : {"z", "r", "h"}) {
    params.add(prefix + ".b" + gate, Tensor(Shape{hidden}));
  }
}

GruVars GruVars::bind(Tape &tape, ParameterSet &params, const std::string &prefix) {
  auto p = [&](const char *name) { return tape.parameter(params.get(prefix + name)); };
  return GruVars{p(".wz"), p(".wr"), p(".wh"), p(".uz"), p(".ur"),
                 p(".uh"), p(".bz"), p(".br"), p(".bh")};
}

namespace {

Var step_from_projections(const GruVars &g, Var xz, Var xr, Var xh, Var h_prev) {
  Var z = sigmoid(add(xz, matmul(h_prev, g.uz)));
  Var r = sigmoid(add(xr, matmul(h_prev, g.ur)));
  Var cand = tanh(add(xh, matmul(mul(r, h_prev), g.uh)));
  // (1-z)⊙h_prev + z⊙cand, written as h_prev + z⊙(cand - h_prev).
  return add(h_prev, mul(z, sub(cand, h_prev)));
}

}  // namespace

Var gru_step(const GruVars &g, Var x, Var h_prev) {
  if (x.shape().rank() != 1) throw ShapeError("gru_step: input must be a vector, got " +
                                              x.shape().str());
  if (!(h_prev.shape() == g.bz.shape())) {
    throw ShapeError("gru_step: incompatible shapes " + h_prev.shape().str() + " and " +
                     g.bz.shape().str());
  }
  return step_from_projections(g, linear(x, g.wz, g.bz), linear(x, g.wr, g.br),
                               linear(x, g.wh, g.bh), h_prev);
}

Var gru_sequence(const GruVars &g, Var xs, Var h0) {
  if (xs.shape().rank() != 2) {
    throw ShapeError("gru_sequence: input must be a matrix, got " + xs.shape().str());
  }
  if (!(h0.shape() == g.bz.shape())) {
    throw ShapeError("gru_sequence: incompatible shapes " + h0.shape().str() + " and " +
                     g.bz.shape().str());
  }
  Var pz = linear(xs, g.wz, g.bz);
  Var pr = linear(xs, g.wr, g.br);
  Var ph = linear(xs, g.wh, g.bh);
  std::vector<Var> states;
  states.reserve(xs.shape()[0]);
  Var h = h0;
  for (size_t t = 0; t < xs.shape()[0]; ++t) {
    h = step_from_projections(g, row(pz, t), row(pr, t), row(ph, t), h);
    states.push_back(h);
  }
  return stack(states);
}

Var additive_attention(Var keys, Var query, Var v, Var values, Var *weights) {
  if (keys.shape().rank() != 2 || values.shape().rank() != 2 ||
      keys.shape()[0] != values.shape()[0]) {
    throw ShapeError("additive_attention: incompatible shapes " + keys.shape().str() +
                     " and " + values.shape().str());
  }
  Var a = softmax(matmul(tanh(add(keys, query)), v));
  if (weights) *weights = a;
  return matmul(a, values);
}

}  // namespace docbot::nn
