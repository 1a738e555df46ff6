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

#include <string>

#include "docbot/nn/ops.hpp"
#include "docbot/nn/parameters.hpp"
#include "docbot/rng.hpp"

namespace docbot::nn {

// Uniform in ±sqrt(6 / (fan_in + fan_out)).
Tensor xavier_uniform(size_t fan_in, size_t fan_out, Rng &rng);

// x [in] or X [T,in] times W [in,out] plus b [out].
Var linear(Var x, Var w, Var b);

// GRU weights stored input-major: z = σ(x·Wz + h·Uz + bz) and so on.
// Registered under "<prefix>.wz", "<prefix>.uz", "<prefix>.bz" and the
// matching r and h names.
void add_gru_params(ParameterSet &params, const std::string &prefix, size_t input,
                    size_t hidden, Rng &rng);

struct GruVars {
  Var wz, wr, wh;
  Var uz, ur, uh;
  Var bz, br, bh;

  static GruVars bind(Tape &tape, ParameterSet &params, const std::string &prefix);
  size_t hidden() const { return bz.shape()[0]; }
};

// h = (1-z)⊙h_prev + z⊙tanh(x·Wh + (r⊙h_prev)·Uh + bh).
Var gru_step(const GruVars &g, Var x, Var h_prev);

// Runs over the rows of X [T,in] from h0 and returns every state as [T,H].
// Input projections are computed once for the whole sequence.
Var gru_sequence(const GruVars &g, Var xs, Var h0);

// Additive attention: weights = softmax(tanh(keys + query)·v) over the T
// rows of keys [T,H], query [H]. Returns weights·values for values [T,D].
Var additive_attention(Var keys, Var query, Var v, Var values, Var *weights = nullptr);

}  // namespace docbot::nn
