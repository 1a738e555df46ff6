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

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace docbot {

struct RawDocument {
  std::string doc_id;
  std::string text;
  std::optional<std::string> title;
};

// Closed part-of-speech tag set.
enum class PosTag {
  kNoun,
  kProperNoun,
  kPronoun,
  kVerb,
  kModal,
  kAdjective,
  kAdverb,
  kDeterminer,
  kPreposition,
  kParticle,
  kInfinitiveMarker,
  kNumber,
  kPunctuation,
  kOther,
};

inline constexpr int kNumPosTags = 14;

// Short names used in the lexicon file ("noun", "propn", "verb", ...).
std::string_view pos_tag_name(PosTag tag);
std::optional<PosTag> parse_pos_tag(std::string_view name);

// Half-open byte range.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t size() const { return end - start; }
  bool operator==(const Span &) const = default;
};

struct Token {
  std::string surface;
  PosTag pos = PosTag::kOther;
  Span span;  // byte offsets into the owning text
};

struct Sentence {
  std::string doc_id;
  size_t index = 0;
  std::string text;
  std::vector<Token> tokens;
};

enum class GrammaticalNumber { kSingular, kPlural };

struct Mention {
  enum class Kind { kPronoun, kNounPhrase };

  size_t sentence_index = 0;
  Span token_range;  // token indices, half-open
  GrammaticalNumber head_number = GrammaticalNumber::kSingular;
  Kind kind = Kind::kNounPhrase;
};

// Lexicon-driven tagger with suffix and context heuristics. A lexicon line
// is "surface<TAB>tag"; repeated surfaces list alternative readings, the
// first being the default.
class PosTagger {
 public:
  PosTagger() = default;

  // Throws ConfigError when the file is missing or malformed.
  static PosTagger load(const std::string &path);
  static PosTagger from_lines(const std::vector<std::string> &lines);

  std::vector<Token> tag(std::vector<Token> tokens) const;

  // All readings for a lowercased surface, default first. Empty if unknown.
  const std::vector<PosTag> &readings(std::string_view lower) const;

  size_t size() const { return lexicon_.size(); }

 private:
  std::map<std::string, std::vector<PosTag>, std::less<>> lexicon_;
};

// Known abbreviations ending in a period ("mr.", "u.s.", "etc.").
class AbbreviationList {
 public:
  AbbreviationList() = default;
  static AbbreviationList load(const std::string &path);
  static AbbreviationList from_lines(const std::vector<std::string> &lines);

  // `word` without the trailing period; comparison is case-insensitive.
  bool contains(std::string_view word) const;

 private:
  std::set<std::string, std::less<>> entries_;
};

// Everything preprocessing needs, loaded from the data directory.
struct TextResources {
  PosTagger tagger;
  AbbreviationList abbreviations;

  // Reads pos_lexicon.tsv and abbreviations.txt from `data_dir`.
  static TextResources load(const std::string &data_dir);
};

// Directory holding the shipped data files. DOCBOT_RESOURCE_DIR overrides the
// compiled-in default.
std::string default_resource_dir();

// Shared handle to resources loaded from default_resource_dir(), loaded once.
const TextResources &default_resources();

// Splits UTF-8 text into word and punctuation tokens with byte spans.
// Tokens carry PosTag::kOther until tagged.
std::vector<Token> tokenize(std::string_view text);

std::vector<Token> tag_pos(std::vector<Token> tokens, const PosTagger &tagger);

// Partitions a tagged token stream of `doc` into sentences at . ! ?
// unless the period closes a known abbreviation. Token spans are rebased
// onto each sentence's text.
std::vector<Sentence> split_sentences(const RawDocument &doc,
                                      const std::vector<Token> &tokens,
                                      const AbbreviationList &abbreviations);

// Noun phrase chunks: maximal runs of determiner/adjective/number/noun
// ending in a noun or proper noun. Returned as token ranges in order.
std::vector<Span> chunk_noun_phrases(const std::vector<Token> &tokens);

GrammaticalNumber noun_phrase_number(const std::vector<Token> &tokens,
                                     Span range);

// Mentions (noun phrases and resolvable pronouns) of one sentence.
std::vector<Mention> find_mentions(const Sentence &sentence);

// Rewrites third-person pronouns with the text of an agreeing antecedent
// from the same or the two previous sentences. Sentences are processed in
// order over already-rewritten text, which makes the operation idempotent.
std::vector<Sentence> resolve_coreference(std::vector<Sentence> sentences);

// tokenize -> tag -> split -> resolve. Throws ValidationError when the
// document text is blank.
std::vector<Sentence> preprocess_document(const RawDocument &doc,
                                          const TextResources &resources);

// Rebuilds `text` and token spans from token surfaces, keeping `gaps[i]`
// as the whitespace before token i.
void rebuild_sentence_text(Sentence &sentence,
                           const std::vector<std::string> &gaps);

// Lowercased content terms (punctuation dropped) of a text, in order.
std::vector<std::string> content_terms(std::string_view text);
std::vector<std::string> content_terms(const std::vector<Token> &tokens);

}  // namespace docbot
