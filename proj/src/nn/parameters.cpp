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

#include "docbot/nn/parameters.hpp"

#include <cstring>

#include "docbot/binary_io.hpp"
#include "docbot/error.hpp"

namespace docbot::nn {
namespace {

constexpr char kMagic[4] = {'D', 'B', 'P', 'M'};
constexpr uint32_t kVersion = 1;

}  // namespace

ParameterSet::ParameterSet(const ParameterSet &other) {
  for (const auto &p : other.params_) params_.push_back(std::make_unique<Parameter>(*p));
}

ParameterSet &ParameterSet::operator=(const ParameterSet &other) {
  if (this != &other) {
    ParameterSet copy(other);
    params_ = std::move(copy.params_);
  }
  return *this;
}

Parameter &ParameterSet::add(std::string name, Tensor init) {
  if (contains(name)) throw ValidationError("duplicate parameter name '" + name + "'");
  Tensor grad(init.shape(), 0.0);
  params_.push_back(
      std::make_unique<Parameter>(Parameter{std::move(name), std::move(init), std::move(grad)}));
  return *params_.back();
}

Parameter &ParameterSet::get(std::string_view name) {
  for (auto &p : params_) {
    if (p->name == name) return *p;
  }
  throw ModelError("missing parameter '" + std::string(name) + "'");
}

const Parameter &ParameterSet::get(std::string_view name) const {
  return const_cast<ParameterSet *>(this)->get(name);
}

bool ParameterSet::contains(std::string_view name) const {
  for (const auto &p : params_) {
    if (p->name == name) return true;
  }
  return false;
}

void ParameterSet::zero_grad() {
  for (auto &p : params_) p->grad.fill(0.0);
}

size_t ParameterSet::num_elements() const {
  size_t n = 0;
  for (const auto &p : params_) n += p->value.size();
  return n;
}

bool ParameterSet::same_values(const ParameterSet &other) const {
  if (size() != other.size()) return false;
  for (size_t i = 0; i < size(); ++i) {
    const Parameter &a = (*this)[i];
    const Parameter &b = other[i];
    if (a.name != b.name || !(a.value.shape() == b.value.shape())) return false;
    if (std::memcmp(a.value.data().data(), b.value.data().data(),
                    a.value.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

std::string ParameterSet::serialize(const nlohmann::json &meta) const {
  nlohmann::json manifest;
  manifest["format_version"] = kVersion;
  manifest["dtype"] = "f64";
  manifest["tensors"] = nlohmann::json::array();
  size_t offset = 0;
  for (const auto &p : params_) {
    manifest["tensors"].push_back(
        {{"name", p->name}, {"shape", p->value.shape().dims()}, {"offset", offset}});
    offset += p->value.size();
  }
  manifest["meta"] = meta;
  std::string text = manifest.dump();

  ByteWriter w;
  w.raw(std::string_view(kMagic, 4));
  w.u32(kVersion);
  w.u64(text.size());
  w.raw(text);
  for (const auto &p : params_) {
    for (double v : p->value.data()) w.f64(v);
  }
  return w.take();
}

std::pair<ParameterSet, nlohmann::json> ParameterSet::deserialize(std::string_view bytes) {
  try {
    return deserialize_checked(bytes);
  } catch (const DataError &e) {
    throw ModelError(e.what());
  } catch (const ShapeError &e) {
    throw ModelError(std::string("parameter container: ") + e.what());
  } catch (const ValidationError &e) {
    throw ModelError(std::string("parameter container: ") + e.what());
  }
}

std::pair<ParameterSet, nlohmann::json> ParameterSet::deserialize_checked(std::string_view bytes) {
  ByteReader r(bytes, "parameter container");
  if (r.raw(4) != std::string_view(kMagic, 4)) {
    throw ModelError("parameter container: bad magic bytes");
  }
  if (uint32_t v = r.u32(); v != kVersion) {
    throw ModelError("parameter container: unsupported version " + std::to_string(v));
  }
  uint64_t manifest_len = r.u64();
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(r.raw(manifest_len));
  } catch (const nlohmann::json::exception &e) {
    throw ModelError(std::string("parameter container: bad manifest: ") + e.what());
  }
  if (manifest.value("dtype", "") != "f64") {
    throw ModelError("parameter container: unsupported dtype");
  }
  ParameterSet set;
  try {
    size_t expected_offset = 0;
    for (const auto &entry : manifest.at("tensors")) {
      auto dims = entry.at("shape").get<std::vector<size_t>>();
      Shape shape{std::span<const size_t>(dims)};
      if (entry.at("offset").get<size_t>() != expected_offset) {
        throw ModelError("parameter container: non-contiguous offsets");
      }
      std::vector<double> data(shape.numel());
      for (double &v : data) v = r.f64();
      expected_offset += data.size();
      set.add(entry.at("name").get<std::string>(), Tensor(shape, std::move(data)));
    }
  } catch (const nlohmann::json::exception &e) {
    throw ModelError(std::string("parameter container: ") + e.what());
  }
  if (!r.done()) throw ModelError("parameter container: trailing bytes");
  return {std::move(set), manifest.value("meta", nlohmann::json::object())};
}

}  // namespace docbot::nn
