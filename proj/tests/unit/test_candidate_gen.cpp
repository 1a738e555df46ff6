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

#include <array>

#include "docbot/candidate_gen.hpp"
#include "docbot/error.hpp"
#include "docbot/strings.hpp"
#include "json.hpp"
#include "support/oracles.hpp"

using namespace docbot;

namespace {

const TextResources &res() {
  static const TextResources r = TextResources::load(DOCBOT_TEST_DATA_DIR);
  return r;
}

std::vector<Sentence> prep(const std::string &text, const std::string &id = "d") {
  return preprocess_document({id, text, {}}, res());
}

using Triple3 = std::array<std::string, 3>;

std::vector<Triple3> texts(const std::vector<SvoTriple> &triples) {
  std::vector<Triple3> out;
  for (const auto &t : triples) {
    out.push_back({t.subject.text, t.verb_phrase.text, t.object.text});
  }
  return out;
}

}  // namespace

TEST_CASE("extract_triples on the documented examples") {
  CHECK(extract_triples(prep("Hello!")[0]).empty());
  CHECK(texts(extract_triples(prep("Docbot answers questions.")[0])) ==
        std::vector<Triple3>{{"Docbot", "answers", "questions"}});
  auto two = extract_triples(
      prep("The laptop has a 4K screen and it supports fast charging.")[0]);
  CHECK(texts(two) == std::vector<Triple3>{{"The laptop", "has", "a 4K screen"},
                                           {"the laptop", "supports", "fast charging"}});
}

TEST_CASE("relation phrases prefer the longest pattern match") {
  CHECK(texts(extract_triples(prep("The lid is made of aluminum.")[0])) ==
        std::vector<Triple3>{{"The lid", "is made of", "aluminum"}});
  CHECK(texts(extract_triples(prep("The kit is designed to help students.")[0])) ==
        std::vector<Triple3>{{"The kit", "is designed to help", "students"}});
  auto rel = extract_triples(prep("The laptop which weighs 1.8 kg.")[0]);
  CHECK(texts(rel) == std::vector<Triple3>{{"The laptop", "weighs", "1.8 kg"}});
  CHECK(extract_triples(prep("The speakers sound great.")[0]).empty());
}

TEST_CASE("triple spans are ordered and reconstruct the source") {
  auto s = prep("The keyboard has a backlight and the trackpad supports gestures.")[0];
  auto triples = extract_triples(s);
  CHECK(triples.size() == 2);
  for (const auto &t : triples) {
    CHECK(t.subject.tokens.end <= t.verb_phrase.tokens.start);
    CHECK(t.verb_phrase.tokens.end <= t.object.tokens.start);
    CHECK(t.object.tokens.end <= s.tokens.size());
    for (const Argument *a : {&t.subject, &t.verb_phrase, &t.object}) {
      std::string joined;
      for (size_t i = a->tokens.start; i < a->tokens.end; ++i) {
        if (i > a->tokens.start) joined += ' ';
        joined += s.tokens[i].surface;
      }
      CHECK(joined == a->text);
    }
    CHECK(t.source == SentenceRef{"d", 0});
  }
}

TEST_CASE("triple_to_sentence") {
  SvoTriple t{{{0, 1}, "Docbot"}, {{1, 2}, "answers"}, {{2, 3}, "questions"}, {}};
  CHECK(triple_to_sentence(t) == "Docbot answers questions.");
  t.subject.text = "the laptop";
  t.object.text = "the ZenBook Pro";
  CHECK(triple_to_sentence(t) == "The laptop answers the ZenBook Pro.");
  t.object.text = "U.S.";
  CHECK(triple_to_sentence(t) == "The laptop answers U.S.");
}

TEST_CASE("generate_candidates assembles the union") {
  CHECK(generate_candidates({}).empty());

  auto sentences = prep("The keyboard has a backlight and the trackpad supports "
                        "gestures. The lid is made of aluminum today.");
  REQUIRE(sentences.size() == 2);
  auto set = generate_candidates(sentences);
  REQUIRE(set.size() == 5);
  CHECK(set.candidates[0].kind == CandidateKind::kRetrievedSentence);
  CHECK(set.candidates[1].text == "The lid is made of aluminum today.");
  CHECK(set.candidates[2].text == "The keyboard has a backlight.");
  CHECK(set.candidates[3].text == "The trackpad supports gestures.");
  CHECK(set.candidates[4].text == "The lid is made of aluminum.");
  for (const auto &c : set.candidates) {
    CHECK((c.kind == CandidateKind::kTripleSentence) == c.triple.has_value());
  }
}

TEST_CASE("duplicate triple sentence keeps the retrieved sentence") {
  auto sentences = prep("The laptop weighs 1.8 kg.");
  auto set = generate_candidates(sentences);
  REQUIRE(set.size() == 1);
  CHECK(set.candidates[0].kind == CandidateKind::kRetrievedSentence);
  // Case folding also counts as a duplicate.
  auto twice = prep("the laptop weighs 1.8 kg. The laptop weighs 1.8 kg.");
  CHECK(generate_candidates(twice).size() == 1);
}

TEST_CASE("candidate count bound") {
  auto sentences = prep("The phone supports fast charging. The camera takes sharp "
                        "photos today. The charger comes with a long cable.");
  size_t triples = 0;
  for (const auto &s : sentences) triples += extract_triples(s).size();
  auto set = generate_candidates(sentences);
  CHECK(set.size() <= sentences.size() + triples);
}

TEST_CASE("candidate JSON lines round trip") {
  auto set = generate_candidates(prep("The keyboard has a backlight and the "
                                      "trackpad supports gestures."));
  std::string jsonl = set.to_jsonl();
  auto back = CandidateSet::from_jsonl(jsonl);
  CHECK(back.to_jsonl() == jsonl);
  auto first = nlohmann::json::parse(split(jsonl, '\n')[1]);
  CHECK(first["kind"] == "triple-sentence");
  CHECK(first["triple"]["subject"]["text"] == "The keyboard");
  CHECK(first["sentence_index"] == 0);
  CHECK_THROWS_AS(CandidateSet::from_jsonl("{\"text\": 1}"), DataError);
  CHECK_THROWS_AS(CandidateSet::from_jsonl("not json"), DataError);
}

TEST_CASE("extraction fixture precision and recall") {
  auto score = testing::score_extraction_fixture(
      std::string(DOCBOT_TEST_DATA_DIR) + "/extraction_fixture.jsonl", res());
  for (const auto &m : score.mismatches) MESSAGE(m);
  MESSAGE("precision ", score.precision(), " recall ", score.recall());
  CHECK(score.sentences == 30);
  CHECK(score.precision() >= 0.8);
  CHECK(score.recall() >= 0.7);
}
