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

#include "docbot/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "docbot/binary_io.hpp"
#include "docbot/error.hpp"
#include "docbot/strings.hpp"

namespace docbot {
namespace {

constexpr char kIndexMagic[4] = {'D', 'B', 'I', 'X'};
constexpr uint32_t kIndexVersion = 1;

std::vector<std::string> unique_sorted(std::vector<std::string> terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  return terms;
}

double term_weight(double idf, double tf, double len, double avg,
                   const RetrievalConfig &c) {
  return idf * (tf * (c.bm25_k1 + 1.0)) /
         (tf + c.bm25_k1 * (1.0 - c.bm25_b + c.bm25_b * len / avg));
}

}  // namespace

void RetrievalConfig::validate() const {
  if (k < 1) throw ValidationError("retrieval k must be >= 1");
  if (!(bm25_k1 >= 0.0) || !std::isfinite(bm25_k1)) {
    throw ValidationError("bm25 k1 must be a non-negative number");
  }
  if (!(bm25_b >= 0.0 && bm25_b <= 1.0)) {
    throw ValidationError("bm25 b must lie in [0, 1]");
  }
}

SentenceIndex SentenceIndex::build(const std::vector<Sentence> &sentences) {
  if (sentences.empty()) throw DataError("cannot index an empty corpus");
  SentenceIndex index;
  for (size_t ord = 0; ord < sentences.size(); ++ord) {
    const Sentence &s = sentences[ord];
    index.refs_.push_back({s.doc_id, s.index});
    std::map<std::string, uint32_t> counts;
    uint32_t length = 0;
    for (const std::string &term : content_terms(s.tokens)) {
      ++counts[term];
      ++length;
    }
    index.lengths_.push_back(length);
    for (const auto &[term, tf] : counts) {
      index.postings_[term].push_back({static_cast<uint32_t>(ord), tf});
    }
  }
  index.finalize();
  return index;
}

void SentenceIndex::finalize() {
  double total = 0.0;
  for (uint32_t len : lengths_) total += len;
  avg_length_ = refs_.empty() ? 0.0 : total / static_cast<double>(refs_.size());
}

size_t SentenceIndex::ordinal_of(const SentenceRef &ref) const {
  for (size_t i = 0; i < refs_.size(); ++i) {
    if (refs_[i] == ref) return i;
  }
  return npos;
}

const std::vector<Posting> &SentenceIndex::postings(std::string_view term) const {
  static const std::vector<Posting> empty;
  auto it = postings_.find(term);
  return it == postings_.end() ? empty : it->second;
}

uint32_t SentenceIndex::term_frequency(std::string_view term, size_t ordinal) const {
  const auto &list = postings(term);
  auto it = std::lower_bound(
      list.begin(), list.end(), ordinal,
      [](const Posting &p, size_t ord) { return p.sentence < ord; });
  return (it != list.end() && it->sentence == ordinal) ? it->tf : 0;
}

std::set<std::string> SentenceIndex::vocabulary() const {
  std::set<std::string> vocab;
  for (const auto &entry : postings_) vocab.insert(entry.first);
  return vocab;
}

std::string SentenceIndex::serialize() const {
  ByteWriter w;
  w.raw(std::string_view(kIndexMagic, 4));
  w.u32(kIndexVersion);
  w.u32(static_cast<uint32_t>(refs_.size()));
  for (size_t i = 0; i < refs_.size(); ++i) {
    w.str(refs_[i].doc_id);
    w.u32(static_cast<uint32_t>(refs_[i].index));
    w.u32(lengths_[i]);
  }
  w.u32(static_cast<uint32_t>(postings_.size()));
  for (const auto &[term, list] : postings_) {
    w.str(term);
    w.u32(static_cast<uint32_t>(list.size()));
    for (const Posting &p : list) {
      w.u32(p.sentence);
      w.u32(p.tf);
    }
  }
  return w.take();
}

SentenceIndex SentenceIndex::deserialize(std::string_view bytes) {
  ByteReader r(bytes, "sentence index");
  if (r.raw(4) != std::string_view(kIndexMagic, 4)) {
    throw DataError("sentence index: bad magic bytes");
  }
  if (uint32_t v = r.u32(); v != kIndexVersion) {
    throw DataError("sentence index: unsupported format version " + std::to_string(v));
  }
  SentenceIndex index;
  uint32_t n = r.u32();
  if (n == 0) throw DataError("sentence index: empty corpus");
  for (uint32_t i = 0; i < n; ++i) {
    SentenceRef ref;
    ref.doc_id = r.str();
    ref.index = r.u32();
    index.refs_.push_back(std::move(ref));
    index.lengths_.push_back(r.u32());
  }
  uint32_t n_terms = r.u32();
  std::string prev_term;
  for (uint32_t t = 0; t < n_terms; ++t) {
    std::string term = r.str();
    if (t > 0 && term <= prev_term) throw DataError("sentence index: terms out of order");
    uint32_t count = r.u32();
    std::vector<Posting> list;
    list.reserve(count);
    for (uint32_t p = 0; p < count; ++p) {
      Posting posting{r.u32(), r.u32()};
      if (posting.sentence >= n || posting.tf == 0 ||
          (!list.empty() && posting.sentence <= list.back().sentence)) {
        throw DataError("sentence index: corrupt posting for '" + term + "'");
      }
      list.push_back(posting);
    }
    prev_term = term;
    index.postings_.emplace(std::move(term), std::move(list));
  }
  if (!r.done()) throw DataError("sentence index: trailing bytes");
  index.finalize();
  return index;
}

SentenceIndex SentenceIndex::load(const std::string &path) {
  return deserialize(read_file(path));
}

void SentenceIndex::save(const std::string &path) const {
  write_file(path, serialize());
}

double bm25_idf(size_t n_sentences, size_t df) {
  const double n = static_cast<double>(n_sentences);
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

double bm25_score(const SentenceIndex &index,
                  const std::vector<std::string> &query_terms, size_t ordinal,
                  const RetrievalConfig &config) {
  double score = 0.0;
  const double len = index.length(ordinal);
  for (const std::string &term : unique_sorted(query_terms)) {
    uint32_t tf = index.term_frequency(term, ordinal);
    if (tf == 0) continue;
    double idf = bm25_idf(index.n_sentences(), index.document_frequency(term));
    score += term_weight(idf, tf, len, index.avg_length(), config);
  }
  return score;
}

std::vector<ScoredSentence> retrieve_top_k(
    const SentenceIndex &index, const std::vector<std::string> &query_terms,
    const RetrievalConfig &config) {
  config.validate();
  std::vector<double> acc(index.n_sentences(), 0.0);
  std::vector<bool> hit(index.n_sentences(), false);
  // Term-sorted, then ordinal-sorted accumulation fixes the summation order.
  for (const std::string &term : unique_sorted(query_terms)) {
    const auto &list = index.postings(term);
    if (list.empty()) continue;
    double idf = bm25_idf(index.n_sentences(), list.size());
    for (const Posting &p : list) {
      acc[p.sentence] += term_weight(idf, p.tf, index.length(p.sentence),
                                     index.avg_length(), config);
      hit[p.sentence] = true;
    }
  }
  std::vector<ScoredSentence> scored;
  for (size_t i = 0; i < acc.size(); ++i) {
    if (hit[i] && acc[i] > 0.0) scored.push_back({index.ref(i), i, acc[i]});
  }
  auto better = [](const ScoredSentence &a, const ScoredSentence &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ref < b.ref;
  };
  size_t k = std::min(scored.size(), static_cast<size_t>(config.k));
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end(), better);
  scored.resize(k);
  return scored;
}

std::vector<ScoredSentence> retrieve_top_k(const SentenceIndex &index,
                                           std::string_view message,
                                           const RetrievalConfig &config) {
  return retrieve_top_k(index, content_terms(message), config);
}

}  // namespace docbot
