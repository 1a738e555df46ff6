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
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace docbot {

// Dense token ids. PAD and UNK are always present at 0 and 1; any further
// reserved tokens passed at construction follow them.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  explicit Vocabulary(std::vector<std::string> extra_reserved = {});

  // Keeps tokens seen at least `min_freq` times, ordered by descending
  // frequency and then lexicographically.
  static Vocabulary build(const std::vector<std::vector<std::string>> &corpus,
                          size_t min_freq, std::vector<std::string> extra_reserved = {});

  int add(const std::string &token);
  int id(std::string_view token) const;
  bool contains(std::string_view token) const;
  const std::string &token(int id) const;
  size_t size() const { return tokens_.size(); }
  size_t reserved() const { return reserved_; }

  std::vector<int> encode(const std::vector<std::string> &tokens) const;

  nlohmann::json to_json() const;
  static Vocabulary from_json(const nlohmann::json &j);

  bool operator==(const Vocabulary &o) const { return tokens_ == o.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  size_t reserved_ = 2;
};

}  // namespace docbot
