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

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docbot/text_prep.hpp"

namespace docbot {

struct SentenceRef {
  std::string doc_id;
  size_t index = 0;

  auto operator<=>(const SentenceRef &) const = default;
};

struct RetrievalConfig {
  int k = 2;
  double bm25_k1 = 1.2;
  double bm25_b = 0.75;

  // Throws ValidationError when out of range.
  void validate() const;
};

struct Posting {
  uint32_t sentence = 0;  // ordinal in the index
  uint32_t tf = 0;

  bool operator==(const Posting &) const = default;
};

// Immutable BM25 inverted index over a sentence collection. Terms are
// lowercased surfaces with punctuation removed.
class SentenceIndex {
 public:
  // Throws DataError on an empty collection.
  static SentenceIndex build(const std::vector<Sentence> &sentences);

  static SentenceIndex deserialize(std::string_view bytes);
  std::string serialize() const;
  static SentenceIndex load(const std::string &path);
  void save(const std::string &path) const;

  size_t n_sentences() const { return refs_.size(); }
  double avg_length() const { return avg_length_; }
  uint32_t length(size_t ordinal) const { return lengths_[ordinal]; }
  const SentenceRef &ref(size_t ordinal) const { return refs_[ordinal]; }
  const std::vector<SentenceRef> &refs() const { return refs_; }

  // Ordinal of a sentence, or npos when it is not indexed.
  static constexpr size_t npos = static_cast<size_t>(-1);
  size_t ordinal_of(const SentenceRef &ref) const;

  // Postings sorted by sentence ordinal; empty for unknown terms.
  const std::vector<Posting> &postings(std::string_view term) const;
  size_t document_frequency(std::string_view term) const {
    return postings(term).size();
  }
  uint32_t term_frequency(std::string_view term, size_t ordinal) const;
  std::set<std::string> vocabulary() const;
  const std::map<std::string, std::vector<Posting>, std::less<>> &all_postings() const {
    return postings_;
  }

  bool operator==(const SentenceIndex &) const = default;

 private:
  void finalize();

  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
  std::vector<SentenceRef> refs_;
  std::vector<uint32_t> lengths_;
  double avg_length_ = 0.0;
};

struct ScoredSentence {
  SentenceRef ref;
  size_t ordinal = 0;
  double score = 0.0;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); positive for all 0 <= df <= N.
double bm25_idf(size_t n_sentences, size_t df);

// Query terms are deduplicated and summed in sorted order.
double bm25_score(const SentenceIndex &index,
                  const std::vector<std::string> &query_terms, size_t ordinal,
                  const RetrievalConfig &config);

// Top-k sentences for `message`, scores descending with ties broken by
// (doc_id, index). Sentences scoring zero are never returned.
std::vector<ScoredSentence> retrieve_top_k(const SentenceIndex &index,
                                           std::string_view message,
                                           const RetrievalConfig &config);

std::vector<ScoredSentence> retrieve_top_k(
    const SentenceIndex &index, const std::vector<std::string> &query_terms,
    const RetrievalConfig &config);

}  // namespace docbot
