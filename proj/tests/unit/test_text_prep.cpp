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

#include "doctest.h"

#include <random>

#include "docbot/error.hpp"
#include "docbot/text_prep.hpp"

using namespace docbot;

namespace {

const TextResources &res() {
  static const TextResources r = TextResources::load(DOCBOT_TEST_DATA_DIR);
  return r;
}

std::vector<std::string> surfaces(const std::vector<Token> &tokens) {
  std::vector<std::string> out;
  for (const auto &t : tokens) out.push_back(t.surface);
  return out;
}

std::vector<PosTag> tags_of(std::vector<std::string> words) {
  std::vector<Token> tokens;
  for (auto &w : words) tokens.push_back({w, PosTag::kOther, {}});
  std::vector<PosTag> out;
  for (const auto &t : tag_pos(tokens, res().tagger)) out.push_back(t.pos);
  return out;
}

RawDocument doc(std::string text) { return {"d", std::move(text), {}}; }

std::string strip_ws(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\n' && c != '\t' && c != '\r') out += c;
  }
  return out;
}

}  // namespace

TEST_CASE("tokenize splits punctuation from words") {
  CHECK(tokenize("").empty());
  CHECK(surfaces(tokenize("Hello, world!")) ==
        std::vector<std::string>{"Hello", ",", "world", "!"});
  CHECK(surfaces(tokenize("ZenBook Pro")) ==
        std::vector<std::string>{"ZenBook", "Pro"});
}

TEST_CASE("tokenize keeps numbers, abbreviations and hyphenated words") {
  CHECK(surfaces(tokenize("It costs 3.5 dollars.")) ==
        std::vector<std::string>{"It", "costs", "3.5", "dollars", "."});
  CHECK(surfaces(tokenize("1,000 units")) ==
        std::vector<std::string>{"1,000", "units"});
  CHECK(surfaces(tokenize("the U.S. market")) ==
        std::vector<std::string>{"the", "U.S", ".", "market"});
  CHECK(surfaces(tokenize("state-of-the-art don't")) ==
        std::vector<std::string>{"state-of-the-art", "don't"});
  CHECK(surfaces(tokenize("Really?!")) == std::vector<std::string>{"Really", "?!"});
}

TEST_CASE("tokenize handles non-ASCII text") {
  auto toks = tokenize("Café € naïve “quote”");
  CHECK(surfaces(toks) ==
        std::vector<std::string>{"Café", "€", "naïve", "“", "quote", "”"});
  for (const auto &t : toks) CHECK(t.span.start < t.span.end);
  // Malformed UTF-8 still makes progress.
  CHECK(tokenize(std::string("a\xff b")).size() == 2);
}

TEST_CASE("token spans index the source text") {
  std::string text = "  The ZenBook,  is light. ";
  for (const auto &t : tokenize(text)) {
    CHECK(text.substr(t.span.start, t.span.size()) == t.surface);
  }
}

TEST_CASE("tag_pos uses lexicon, rules and context") {
  CHECK(tags_of({"runs"}) == std::vector<PosTag>{PosTag::kVerb});
  CHECK(tags_of({"!"}) == std::vector<PosTag>{PosTag::kPunctuation});
  CHECK(tags_of({"The", "display", "is", "bright"}) ==
        std::vector<PosTag>{PosTag::kDeterminer, PosTag::kNoun, PosTag::kVerb,
                            PosTag::kAdjective});
  CHECK(tags_of({"Docbot", "answers", "questions"}) ==
        std::vector<PosTag>{PosTag::kProperNoun, PosTag::kVerb, PosTag::kNoun});
  CHECK(tags_of({"wants", "to", "buy"})[1] == PosTag::kInfinitiveMarker);
  CHECK(tags_of({"went", "to", "Paris"})[1] == PosTag::kPreposition);
  CHECK(tags_of({"3.5"}) == std::vector<PosTag>{PosTag::kNumber});
  // Unknown words: capitalized -> proper noun, otherwise noun by default.
  CHECK(tags_of({"ZenBook"}) == std::vector<PosTag>{PosTag::kProperNoun});
  CHECK(tags_of({"blorf"}) == std::vector<PosTag>{PosTag::kNoun});
  CHECK(tags_of({"quickly"}) == std::vector<PosTag>{PosTag::kAdverb});
}

TEST_CASE("lexicon parsing rejects malformed lines") {
  CHECK_THROWS_AS(PosTagger::from_lines({"word"}), ConfigError);
  CHECK_THROWS_AS(PosTagger::from_lines({"word\tbogus"}), ConfigError);
  CHECK_THROWS_AS(PosTagger::load("/nonexistent/lexicon.tsv"), ConfigError);
  auto t = PosTagger::from_lines({"run\tverb", "run\tnoun"});
  CHECK(t.readings("run").size() == 2);
  CHECK(t.readings("run").front() == PosTag::kVerb);
}

TEST_CASE("split_sentences at terminal punctuation") {
  auto split = [](const std::string &text) {
    RawDocument d = doc(text);
    return split_sentences(d, tag_pos(tokenize(text), res().tagger),
                           res().abbreviations);
  };
  auto s = split("A phone. A laptop? Yes!");
  REQUIRE(s.size() == 3);
  CHECK(s[0].text == "A phone.");
  CHECK(s[1].text == "A laptop?");
  CHECK(s[2].text == "Yes!");
  CHECK(s[2].index == 2);
  CHECK(split("It costs 3.5 dollars.").size() == 1);
  CHECK(split("").empty());
  CHECK(split("Ask Dr. Smith about it. Then leave.").size() == 2);
  CHECK(split("No terminal punctuation here").size() == 1);
  auto quoted = split("He said \"great.\" Then left.");
  REQUIRE(quoted.size() == 2);
  CHECK(quoted[0].text == "He said \"great.\"");
  for (const auto &sentence : s) {
    for (const auto &t : sentence.tokens) {
      CHECK(sentence.text.substr(t.span.start, t.span.size()) == t.surface);
    }
  }
}

TEST_CASE("resolve_coreference replaces pronouns with agreeing antecedents") {
  auto resolved = preprocess_document(
      doc("The ZenBook Pro is light. It weighs 1.8 kg."), res());
  REQUIRE(resolved.size() == 2);
  CHECK(resolved[0].text == "The ZenBook Pro is light.");
  CHECK(resolved[1].text == "The ZenBook Pro weighs 1.8 kg.");

  auto clause = preprocess_document(
      doc("The laptop has a 4K screen and it supports fast charging."), res());
  REQUIRE(clause.size() == 1);
  CHECK(clause[0].text ==
        "The laptop has a 4K screen and the laptop supports fast charging.");

  auto initial = preprocess_document(doc("It works."), res());
  CHECK(initial[0].text == "It works.");

  auto none = preprocess_document(doc("The phone is red."), res());
  CHECK(none[0].text == "The phone is red.");

  auto plural = preprocess_document(
      doc("The speakers are loud. They sound great."), res());
  CHECK(plural[1].text == "The speakers sound great.");

  auto possessive = preprocess_document(
      doc("The ZenBook is thin. Its battery lasts ten hours."), res());
  CHECK(possessive[1].text == "The ZenBook's battery lasts ten hours.");

  // Number disagreement leaves the pronoun alone.
  auto mismatch = preprocess_document(doc("The phone is red. They work."), res());
  CHECK(mismatch[1].text == "They work.");

  // Beyond the two-sentence window nothing is found.
  auto far = preprocess_document(
      doc("The phone is red. Yes. Yes. Yes. It works."), res());
  CHECK(far.back().text == "It works.");

  // Relative "that" is not a pronoun.
  auto relative = preprocess_document(
      doc("The laptop has a screen that is bright."), res());
  CHECK(relative[0].text == "The laptop has a screen that is bright.");
}

TEST_CASE("resolved token spans are consistent") {
  auto s = preprocess_document(
      doc("The ZenBook is thin. Its battery lasts long and it charges fast."),
      res());
  for (const auto &sentence : s) {
    for (const auto &t : sentence.tokens) {
      CHECK(sentence.text.substr(t.span.start, t.span.size()) == t.surface);
    }
  }
}

TEST_CASE("find_mentions reports noun phrases and pronouns") {
  auto s = preprocess_document(doc("The phones are cheap."), res());
  auto m = find_mentions(s[0]);
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == Mention::Kind::kNounPhrase);
  CHECK(m[0].head_number == GrammaticalNumber::kPlural);
  CHECK(m[0].token_range == Span{0, 2});

  RawDocument d = doc("It works.");
  auto raw = split_sentences(d, tag_pos(tokenize(d.text), res().tagger),
                             res().abbreviations);
  auto pm = find_mentions(raw[0]);
  REQUIRE(pm.size() == 1);
  CHECK(pm[0].kind == Mention::Kind::kPronoun);
}

TEST_CASE("preprocess_document rejects blank text") {
  CHECK_THROWS_AS(preprocess_document(doc("   \n"), res()), ValidationError);
  CHECK_THROWS_AS(preprocess_document(doc(""), res()), ValidationError);
}

TEST_CASE("document without pronouns equals split-only output") {
  RawDocument d = doc("The phone is red. The laptop is light!");
  auto split_only = split_sentences(d, tag_pos(tokenize(d.text), res().tagger),
                                    res().abbreviations);
  auto full = preprocess_document(d, res());
  REQUIRE(split_only.size() == full.size());
  for (size_t i = 0; i < full.size(); ++i) CHECK(full[i].text == split_only[i].text);
}

// Random documents assembled from a pool of fragments exercise the
// partition, idempotence and tag-closure properties.
TEST_CASE("properties over random documents") {
  const std::vector<std::string> pool = {
      "The ZenBook Pro is light.", "It weighs 1.8 kg.", "They are cheap.",
      "The speakers sound great.", "Its battery lasts ten hours.",
      "Dr. Smith likes it!", "Does this work?", "That is great.",
      "The laptop has a 4K screen and it supports fast charging.",
      "Prices start at 3.5 dollars.", "The phones ship in two days.",
      "Her laptop is thin.", "The U.S. store sells them.", "Café prices rose."};
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      if (i) text += (rng() % 3 == 0) ? "\n" : " ";
      text += pool[rng() % pool.size()];
    }
    auto once = preprocess_document(doc(text), res());
    // Partition of the post-substitution document.
    std::string joined, rebuilt;
    for (const auto &s : once) {
      joined += strip_ws(s.text);
      for (const auto &t : s.tokens) rebuilt += t.surface;
      for (const auto &t : s.tokens) {
        CHECK(static_cast<int>(t.pos) < kNumPosTags);
        CHECK(!t.surface.empty());
      }
    }
    CHECK(joined == rebuilt);
    // Idempotence.
    auto twice = resolve_coreference(once);
    REQUIRE(twice.size() == once.size());
    for (size_t i = 0; i < once.size(); ++i) CHECK(twice[i].text == once[i].text);
    // Determinism.
    auto again = preprocess_document(doc(text), res());
    for (size_t i = 0; i < once.size(); ++i) CHECK(again[i].text == once[i].text);
  }
}

TEST_CASE("content_terms drops punctuation and folds case") {
  CHECK(content_terms("Hello, World!") ==
        std::vector<std::string>{"hello", "world"});
}
