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

#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "docbot/dialogue_data.hpp"
#include "json.hpp"

namespace docbot {

struct EvalReport {
  size_t n = 0;
  size_t num_contexts = 0;
  std::map<int, double> recalls;  // k -> R_n@k

  nlohmann::json to_json() const;
};

// Scores for each candidate of a group, in candidate order.
using GroupScorer = std::function<std::vector<double>(const ExampleGroup &)>;

// Zero-based rank of the best-placed positive when candidates are sorted by
// descending score, ties going to the earlier candidate.
size_t best_positive_rank(const std::vector<double> &scores, const std::vector<int> &labels);

// Every group must hold the same number n of candidates and at least one
// positive (ValidationError otherwise); each k must lie in 1..n.
EvalReport evaluate_recall(const std::vector<ExampleGroup> &groups, const GroupScorer &scorer,
                           const std::vector<int> &ks);

// Cosine similarity of tf-idf vectors, the concatenated context against
// the response. idf(t) = ln((1 + N) / (1 + df(t))) + 1.
class TfidfScorer {
 public:
  static TfidfScorer fit(const std::vector<std::vector<std::string>> &documents);
  // Documents are the distinct utterances and responses of the corpus.
  static TfidfScorer fit(const std::vector<DialogueExample> &corpus);

  double idf(const std::string &term) const;
  double score_terms(const std::vector<std::string> &context_terms,
               const std::vector<std::string> &response_terms) const;
  double score(const std::vector<std::string> &context, const std::string &response) const;
  std::vector<double> score_group(const ExampleGroup &group) const;

  size_t num_documents() const { return num_docs_; }

 private:
  std::unordered_map<std::string, size_t> df_;
  size_t num_docs_ = 0;
};

}  // namespace docbot
