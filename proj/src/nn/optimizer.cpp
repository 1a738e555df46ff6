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

#include "docbot/nn/optimizer.hpp"

#include <cmath>

#include "docbot/error.hpp"

namespace docbot::nn {

void OptimizerConfig::validate() const {
  if (!(lr >= 0) || !std::isfinite(lr)) throw ConfigError("learning rate must be >= 0");
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1)) {
    throw ConfigError("adam betas must lie in [0, 1)");
  }
  if (!(eps > 0)) throw ConfigError("adam epsilon must be positive");
  if (!(clip_norm >= 0)) throw ConfigError("clip norm must be >= 0");
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) { config_.validate(); }

double Optimizer::step(ParameterSet &params) {
  double sq = 0;
  for (const auto &p : params) {
    for (double g : p->grad.data()) {
      if (!std::isfinite(g)) throw TrainingError("non-finite gradient in " + p->name);
      sq += g * g;
    }
  }
  const double norm = std::sqrt(sq);
  const double factor =
      (config_.clip_norm > 0 && norm > config_.clip_norm) ? config_.clip_norm / norm : 1.0;

  ++t_;
  if (config_.algorithm == Algorithm::kSgd) {
    for (auto &p : params) {
      auto value = p->value.data();
      auto grad = p->grad.data();
      for (size_t i = 0; i < value.size(); ++i) value[i] -= config_.lr * factor * grad[i];
    }
  } else {
    if (m_.empty()) {
      for (const auto &p : params) {
        m_.emplace_back(p->value.size(), 0.0);
        v_.emplace_back(p->value.size(), 0.0);
      }
    }
    if (m_.size() != params.size()) {
      throw UsageError("optimizer state does not match the parameter set");
    }
    const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (size_t k = 0; k < params.size(); ++k) {
      auto value = params[k].value.data();
      auto grad = params[k].grad.data();
      if (m_[k].size() != value.size()) {
        throw UsageError("optimizer state does not match " + params[k].name);
      }
      for (size_t i = 0; i < value.size(); ++i) {
        const double g = grad[i] * factor;
        m_[k][i] = config_.beta1 * m_[k][i] + (1 - config_.beta1) * g;
        v_[k][i] = config_.beta2 * v_[k][i] + (1 - config_.beta2) * g * g;
        const double mhat = m_[k][i] / c1;
        const double vhat = v_[k][i] / c2;
        value[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
      }
    }
  }
  params.zero_grad();
  return norm;
}

}  // namespace docbot::nn
