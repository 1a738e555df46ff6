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
#include <vector>

#include "docbot/nn/parameters.hpp"

namespace docbot::nn {

enum class Algorithm { kSgd, kAdam };

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::kAdam;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 5.0;  // global L2 norm; 0 disables clipping

  void validate() const;
};

// Applies the accumulated gradients of a ParameterSet and then zeroes
// them. Adam moments are kept per parameter position, so the same set must
// be passed on every step.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config);

  // Returns the global gradient norm before clipping. Throws TrainingError
  // naming the first parameter holding a non-finite gradient; nothing is
  // updated in that case.
  double step(ParameterSet &params);

  const OptimizerConfig &config() const { return config_; }
  uint64_t steps() const { return t_; }

 private:
  OptimizerConfig config_;
  std::vector<std::vector<double>> m_, v_;
  uint64_t t_ = 0;
};

}  // namespace docbot::nn
