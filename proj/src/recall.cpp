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

#include "docbot/recall.hpp"

#include <cmath>
#include <set>

#include "docbot/error.hpp"

namespace docbot {

nlohmann::json EvalReport::to_json() const {
  nlohmann::json r = nlohmann::json::object();
  for (const auto &[k, v] : recalls) r["R" + std::to_string(n) + "@" + std::to_string(k)] = v;
  return {{"n", n}, {"num_contexts", num_contexts}, {"recalls", r}};
}

size_t best_positive_rank(const std::vector<double> &scores, const std::vector<int> &labels) {
  size_t best = scores.size();
  for (size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    size_t rank = 0;
    for (size_t j = 0; j < scores.size(); ++j) {
      if (scores[j] > scores[i] || (scores[j] == scores[i] && j < i)) ++rank;
    }
    best = std::min(best, rank);
  }
  return best;
}

EvalReport evaluate_recall(const std::vector<ExampleGroup> &groups, const GroupScorer &scorer,
                           const std::vector<int> &ks) {
  if (groups.empty()) throw ValidationError("evaluation set is empty");
  EvalReport report;
  report.n = groups.front().responses.size();
  report.num_contexts = groups.size();
  for (int k : ks) {
    if (k < 1 || static_cast<size_t>(k) > report.n) {
      throw UsageError("k=" + std::to_string(k) + " outside 1.." + std::to_string(report.n));
    }
  }
  std::map<int, size_t> hits;
  for (int k : ks) hits[k] = 0;
  for (size_t g = 0; g < groups.size(); ++g) {
    const auto &group = groups[g];
    if (group.responses.size() != report.n) {
      throw ValidationError("context " + std::to_string(g + 1) + " has " +
                            std::to_string(group.responses.size()) + " candidates, expected " +
                            std::to_string(report.n));
    }
    if (!group.has_positive()) {
      throw ValidationError("context " + std::to_string(g + 1) + " has no positive candidate");
    }
    std::vector<double> scores = scorer(group);
    if (scores.size() != report.n) throw ValidationError("scorer returned a wrong count");
    const size_t rank = best_positive_rank(scores, group.labels);
    for (auto &[k, h] : hits) {
      if (rank < static_cast<size_t>(k)) ++h;
    }
  }
  for (const auto &[k, h] : hits) {
    report.recalls[k] = static_cast<double>(h) / static_cast<double>(groups.size());
  }
  return report;
}

TfidfScorer TfidfScorer::fit(const std::vector<std::vector<std::string>> &documents) {
  TfidfScorer s;
  s.num_docs_ = documents.size();
  for (const auto &doc : documents) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const auto &t : seen) ++s.df_[t];
  }
  return s;
}

TfidfScorer TfidfScorer::fit(const std::vector<DialogueExample> &corpus) {
  std::set<std::string> texts;
  for (const auto &ex : corpus) {
    texts.insert(ex.context.begin(), ex.context.end());
    texts.insert(ex.response);
  }
  std::vector<std::vector<std::string>> docs;
  for (const auto &t : texts) docs.push_back(matcher_tokens(t));
  return fit(docs);
}

double TfidfScorer::idf(const std::string &term) const {
  auto it = df_.find(term);
  const double df = it == df_.end() ? 0.0 : static_cast<double>(it->second);
  return std::log((1.0 + static_cast<double>(num_docs_)) / (1.0 + df)) + 1.0;
}

double TfidfScorer::score_terms(const std::vector<std::string> &context_terms,
                                const std::vector<std::string> &response_terms) const {
  std::map<std::string, double> a, b;
  for (const auto &t : context_terms) a[t] += 1;
  for (const auto &t : response_terms) b[t] += 1;
  double dot = 0, na = 0, nb = 0;
  for (auto &[t, c] : a) {
    const double w = c * idf(t);
    na += w * w;
    auto it = b.find(t);
    if (it != b.end()) dot += w * it->second * idf(t);
  }
  for (auto &[t, c] : b) {
    const double w = c * idf(t);
    nb += w * w;
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

double TfidfScorer::score(const std::vector<std::string> &context,
                          const std::string &response) const {
  std::vector<std::string> terms;
  for (const auto &u : context) {
    auto t = matcher_tokens(u);
    terms.insert(terms.end(), t.begin(), t.end());
  }
  return score_terms(terms, matcher_tokens(response));
}

std::vector<double> TfidfScorer::score_group(const ExampleGroup &group) const {
  std::vector<double> out;
  for (const auto &r : group.responses) out.push_back(score(group.context, r));
  return out;
}

}  // namespace docbot
