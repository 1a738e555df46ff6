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
#include <string>
#include <vector>

#include "docbot/nn/tape.hpp"

namespace docbot::nn {

struct GradCheckOptions {
  double eps = 1e-5;
  double tolerance = 1e-4;
  // Elements checked per parameter; 0 checks all of them. Sampled
  // positions are drawn from `seed`.
  size_t max_per_param = 0;
  uint64_t seed = 1;
};

struct GradCheckResult {
  std::string name;
  bool passed = true;
  double max_rel_error = 0;
  std::string worst_param;
  size_t worst_index = 0;
  size_t checked = 0;
};

// Builds the scalar loss from parameters bound on the given tape. Must be
// a pure function of the parameter values.
using LossFn = std::function<Var(Tape &, ParameterSet &)>;

// Compares backward() against central differences with per-element
// relative error |a-n| / max(1e-8, |a|+|n|). Parameter values are
// restored afterwards and gradients left zeroed.
GradCheckResult check_gradients(const std::string &name, ParameterSet &params,
                                const LossFn &loss, const GradCheckOptions &opts = {});

// Finite-difference checks over the generic layers: GRU step and
// sequence, additive attention, conv/pool stack, softmax family,
// embedding lookup and the two losses.
std::vector<GradCheckResult> layer_gradient_suite(uint64_t seed = 7);

}  // namespace docbot::nn
