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

#include "docbot/dialogue_data.hpp"

#include <algorithm>

#include "docbot/error.hpp"
#include "docbot/strings.hpp"
#include "docbot/text_prep.hpp"
#include "json.hpp"

namespace docbot {

bool ExampleGroup::has_positive() const {
  return std::find(labels.begin(), labels.end(), 1) != labels.end();
}

std::vector<std::string> matcher_tokens(std::string_view text) { return content_terms(text); }

std::vector<DialogueExample> parse_dialogue_jsonl(std::string_view content) {
  std::vector<DialogueExample> out;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= content.size()) {
    size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      DialogueExample ex;
      ex.context = j.at("context").get<std::vector<std::string>>();
      ex.response = j.at("response").get<std::string>();
      ex.label = j.at("label").get<int>();
      if (ex.label != 0 && ex.label != 1) throw DataError("label must be 0 or 1");
      out.push_back(std::move(ex));
    } catch (const nlohmann::json::exception &e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError &e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<DialogueExample> load_dialogue_jsonl(const std::string &path) {
  try {
    return parse_dialogue_jsonl(read_file(path));
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

std::string to_dialogue_jsonl(const std::vector<DialogueExample> &examples) {
  std::string out;
  for (const auto &ex : examples) {
    nlohmann::json j = {{"context", ex.context}, {"response", ex.response}, {"label", ex.label}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<ExampleGroup> group_by_context(const std::vector<DialogueExample> &examples) {
  std::vector<ExampleGroup> groups;
  for (const auto &ex : examples) {
    if (groups.empty() || groups.back().context != ex.context) {
      groups.push_back({ex.context, {}, {}});
    }
    groups.back().responses.push_back(ex.response);
    groups.back().labels.push_back(ex.label);
  }
  return groups;
}

std::vector<ExampleGroup> group_fixed(const std::vector<DialogueExample> &examples, size_t n) {
  if (n == 0) throw UsageError("candidates per context must be positive");
  if (examples.size() % n != 0) {
    throw DataError(std::to_string(examples.size()) + " lines do not split into groups of " +
                    std::to_string(n));
  }
  std::vector<ExampleGroup> groups;
  for (size_t i = 0; i < examples.size(); i += n) {
    ExampleGroup g{examples[i].context, {}, {}};
    for (size_t j = i; j < i + n; ++j) {
      if (examples[j].context != g.context) {
        throw DataError("line " + std::to_string(j + 1) + ": context differs within group of " +
                        std::to_string(n));
      }
      g.responses.push_back(examples[j].response);
      g.labels.push_back(examples[j].label);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

}  // namespace docbot
