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
#include <vector>

namespace docbot {

// One line of the dialogue corpus format.
struct DialogueExample {
  std::vector<std::string> context;  // oldest first
  std::string response;
  int label = 0;
};

// A context with every candidate response that follows it.
struct ExampleGroup {
  std::vector<std::string> context;
  std::vector<std::string> responses;
  std::vector<int> labels;

  bool has_positive() const;
};

// Lowercased word tokens used by the matcher and the tf-idf baseline.
std::vector<std::string> matcher_tokens(std::string_view text);

// Throws DataError naming the offending line.
std::vector<DialogueExample> parse_dialogue_jsonl(std::string_view content);
std::vector<DialogueExample> load_dialogue_jsonl(const std::string &path);
std::string to_dialogue_jsonl(const std::vector<DialogueExample> &examples);

// Merges runs of consecutive lines sharing a context.
std::vector<ExampleGroup> group_by_context(const std::vector<DialogueExample> &examples);
// Exactly n consecutive lines per context; throws DataError otherwise.
std::vector<ExampleGroup> group_fixed(const std::vector<DialogueExample> &examples, size_t n);

}  // namespace docbot
