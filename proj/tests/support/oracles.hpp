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

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "docbot/candidate_gen.hpp"
#include "docbot/retrieval.hpp"
#include "docbot/strings.hpp"
#include "docbot/text_prep.hpp"

namespace docbot::testing {

// Counts terms straight from each sentence's tokens and scores every
// sentence, then sorts with the documented tie-break.
inline std::vector<ScoredSentence> brute_force_top_k(const std::vector<Sentence> &sentences,
                                                     const std::vector<std::string> &query,
                                                     const RetrievalConfig &cfg) {
  std::vector<std::vector<std::string>> terms;
  double total = 0;
  for (const auto &s : sentences) {
    terms.push_back(content_terms(s.tokens));
    total += static_cast<double>(terms.back().size());
  }
  const double n = static_cast<double>(sentences.size());
  const double avg = total / n;
  std::vector<std::string> q = query;
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());

  std::vector<ScoredSentence> out;
  for (size_t i = 0; i < sentences.size(); ++i) {
    double score = 0;
    bool matched = false;
    for (const auto &term : q) {
      double tf = static_cast<double>(std::count(terms[i].begin(), terms[i].end(), term));
      if (tf == 0) continue;
      double df = 0;
      for (const auto &t : terms) {
        if (std::find(t.begin(), t.end(), term) != t.end()) df += 1;
      }
      double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      double len = static_cast<double>(terms[i].size());
      score += idf * (tf * (cfg.bm25_k1 + 1.0)) /
               (tf + cfg.bm25_k1 * (1.0 - cfg.bm25_b + cfg.bm25_b * len / avg));
      matched = true;
    }
    if (matched && score > 0) {
      out.push_back({{sentences[i].doc_id, sentences[i].index}, i, score});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ref < b.ref;
  });
  if (out.size() > static_cast<size_t>(cfg.k)) out.resize(cfg.k);
  return out;
}

struct ExtractionScore {
  size_t sentences = 0, gold = 0, predicted = 0, correct = 0;
  std::vector<std::string> mismatches;

  double precision() const { return predicted ? double(correct) / double(predicted) : 0.0; }
  double recall() const { return gold ? double(correct) / double(gold) : 0.0; }
};

// Triples compare on lower-cased, trimmed (subject, verb phrase, object) text.
inline ExtractionScore score_extraction_fixture(const std::string &path,
                                                const TextResources &res) {
  using Triple3 = std::array<std::string, 3>;
  auto norm = [](Triple3 t) {
    for (auto &s : t) s = ascii_lower(trim(s));
    return t;
  };
  ExtractionScore out;
  for (const auto &line : split(read_file(path), '\n')) {
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line);
    ++out.sentences;
    std::vector<Triple3> gold;
    for (const auto &t : j["triples"]) gold.push_back(norm({t[0], t[1], t[2]}));
    std::vector<Triple3> predicted;
    for (const auto &s : preprocess_document({"d", j["sentence"].get<std::string>(), {}}, res)) {
      for (const auto &t : extract_triples(s)) {
        predicted.push_back(norm({t.subject.text, t.verb_phrase.text, t.object.text}));
      }
    }
    out.gold += gold.size();
    out.predicted += predicted.size();
    for (const auto &p : predicted) {
      auto it = std::find(gold.begin(), gold.end(), p);
      if (it != gold.end()) {
        ++out.correct;
        gold.erase(it);
      } else {
        out.mismatches.push_back("unexpected: " + p[0] + " | " + p[1] + " | " + p[2]);
      }
    }
    for (const auto &g : gold) out.mismatches.push_back("missed: " + g[0] + " | " + g[1] + " | " + g[2]);
  }
  return out;
}

}  // namespace docbot::testing
