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

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "docbot/nn/tensor.hpp"
#include "json.hpp"

namespace docbot::nn {

struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;  // same shape as value; accumulated by Tape::backward
};

// Named parameters with stable addresses, in insertion order.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet &other);
  ParameterSet &operator=(const ParameterSet &other);
  ParameterSet(ParameterSet &&) = default;
  ParameterSet &operator=(ParameterSet &&) = default;

  // Throws ValidationError on a duplicate name.
  Parameter &add(std::string name, Tensor init);

  Parameter &get(std::string_view name);
  const Parameter &get(std::string_view name) const;
  bool contains(std::string_view name) const;

  size_t size() const { return params_.size(); }
  Parameter &operator[](size_t i) { return *params_[i]; }
  const Parameter &operator[](size_t i) const { return *params_[i]; }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();
  size_t num_elements() const;

  // Same names, shapes and values, bit for bit.
  bool same_values(const ParameterSet &other) const;

  // Container format: "DBPM", u32 version, u64 manifest length, JSON
  // manifest {format_version, dtype, tensors: [{name, shape, offset}],
  // meta}, then the raw little-endian float64 arrays in manifest order.
  std::string serialize(const nlohmann::json &meta = nlohmann::json::object()) const;
  static std::pair<ParameterSet, nlohmann::json> deserialize(std::string_view bytes);

 private:
  static std::pair<ParameterSet, nlohmann::json> deserialize_checked(std::string_view bytes);

  std::vector<std::unique_ptr<Parameter>> params_;
};

}  // namespace docbot::nn
