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

#include "docbot/vocabulary.hpp"

#include <algorithm>
#include <map>

#include "docbot/error.hpp"

namespace docbot {

Vocabulary::Vocabulary(std::vector<std::string> extra_reserved) {
  add("<pad>");
  add("<unk>");
  for (auto &t : extra_reserved) add(t);
  reserved_ = tokens_.size();
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>> &corpus,
                             size_t min_freq, std::vector<std::string> extra_reserved) {
  std::map<std::string, size_t> counts;
  for (const auto &line : corpus) {
    for (const auto &t : line) ++counts[t];
  }
  std::vector<std::pair<std::string, size_t>> kept;
  for (auto &[t, c] : counts) {
    if (c >= std::max<size_t>(min_freq, 1)) kept.emplace_back(t, c);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  Vocabulary v(std::move(extra_reserved));
  for (auto &[t, c] : kept) v.add(t);
  return v;
}

int Vocabulary::add(const std::string &token) {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  const int id = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

int Vocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return ids_.count(std::string(token)) > 0;
}

const std::string &Vocabulary::token(int id) const {
  if (id < 0 || static_cast<size_t>(id) >= tokens_.size()) {
    throw DataError("token id " + std::to_string(id) + " outside vocabulary");
  }
  return tokens_[static_cast<size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string> &tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto &t : tokens) out.push_back(id(t));
  return out;
}

nlohmann::json Vocabulary::to_json() const {
  return {{"tokens", tokens_}, {"reserved", reserved_}};
}

Vocabulary Vocabulary::from_json(const nlohmann::json &j) {
  Vocabulary v;
  try {
    auto tokens = j.at("tokens").get<std::vector<std::string>>();
    auto reserved = j.at("reserved").get<size_t>();
    if (tokens.size() < 2 || tokens[0] != "<pad>" || tokens[1] != "<unk>" ||
        reserved > tokens.size()) {
      throw ModelError("vocabulary lacks its reserved entries");
    }
    v.tokens_.clear();
    v.ids_.clear();
    for (auto &t : tokens) {
      if (v.contains(t)) throw ModelError("duplicate vocabulary entry '" + t + "'");
      v.add(t);
    }
    v.reserved_ = reserved;
  } catch (const nlohmann::json::exception &e) {
    throw ModelError(std::string("malformed vocabulary: ") + e.what());
  }
  return v;
}

}  // namespace docbot
