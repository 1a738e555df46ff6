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

#include "docbot/candidate_gen.hpp"

#include <set>

#include "docbot/error.hpp"
#include "docbot/strings.hpp"
#include "json.hpp"

namespace docbot {
namespace {

using json = nlohmann::json;

bool is_relative_pronoun(std::string_view lower) {
  return lower == "that" || lower == "which" || lower == "who" ||
         lower == "whom" || lower == "whose";
}

bool is_possessive_determiner(std::string_view lower) {
  return lower == "its" || lower == "their" || lower == "his" ||
         lower == "my" || lower == "our" || lower == "your";
}

bool is_w(PosTag t) {
  return t == PosTag::kNoun || t == PosTag::kProperNoun ||
         t == PosTag::kAdjective || t == PosTag::kAdverb ||
         t == PosTag::kPronoun || t == PosTag::kDeterminer ||
         t == PosTag::kNumber;
}

bool is_p(PosTag t) {
  return t == PosTag::kPreposition || t == PosTag::kParticle ||
         t == PosTag::kInfinitiveMarker;
}

struct Argumentish {
  Span range;
  bool usable;  // false for relative pronouns
};

// Noun phrase chunks plus standalone personal pronouns, in token order.
std::vector<Argumentish> argument_phrases(const std::vector<Token> &tokens) {
  std::vector<Argumentish> out;
  for (Span np : chunk_noun_phrases(tokens)) out.push_back({np, true});
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].pos != PosTag::kPronoun) continue;
    std::string lower = ascii_lower(tokens[i].surface);
    if (is_possessive_determiner(lower)) continue;
    out.push_back({{i, i + 1}, !is_relative_pronoun(lower)});
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.range.start < b.range.start;
  });
  return out;
}

// Verb group starting at `i`: [modal] [adverb*] verb ((adverb*) verb)*
// followed by an optional particle or adverb. Returns the end index, or
// `i` when no verb group starts there.
size_t match_verb_group(const std::vector<Token> &t, size_t i) {
  const size_t n = t.size();
  size_t j = i;
  if (j < n && t[j].pos == PosTag::kModal) ++j;
  size_t k = j;
  while (k < n && t[k].pos == PosTag::kAdverb) ++k;
  if (k >= n || t[k].pos != PosTag::kVerb) return i;
  j = k + 1;
  while (true) {
    size_t m = j;
    while (m < n && t[m].pos == PosTag::kAdverb) ++m;
    if (m < n && t[m].pos == PosTag::kVerb) {
      j = m + 1;
    } else {
      break;
    }
  }
  if (j < n && (t[j].pos == PosTag::kParticle || t[j].pos == PosTag::kAdverb)) ++j;
  return j;
}

// Longest relation phrase starting at `i`, or `i` when none.
size_t match_relation(const std::vector<Token> &t, size_t i) {
  size_t end = match_verb_group(t, i);
  if (end == i) return i;
  while (true) {
    size_t k = end;
    while (k < t.size() && is_w(t[k].pos)) ++k;
    if (k < t.size() && is_p(t[k].pos)) {
      end = k + 1;
      // An adjacent verb group continues the relation ("designed to help").
      size_t more = match_verb_group(t, end);
      if (more == end) break;
      end = more;
    } else {
      break;
    }
  }
  return end;
}

Argument make_argument(const Sentence &s, Span range) {
  const size_t start = s.tokens[range.start].span.start;
  const size_t stop = s.tokens[range.end - 1].span.end;
  return {range, s.text.substr(start, stop - start)};
}

json argument_json(const Argument &a) {
  return {{"start", a.tokens.start}, {"end", a.tokens.end}, {"text", a.text}};
}

Argument argument_from_json(const json &j) {
  return {{j.at("start").get<size_t>(), j.at("end").get<size_t>()},
          j.at("text").get<std::string>()};
}

}  // namespace

std::string_view candidate_kind_name(CandidateKind kind) {
  return kind == CandidateKind::kRetrievedSentence ? "retrieved-sentence"
                                                   : "triple-sentence";
}

std::vector<SvoTriple> extract_triples(const Sentence &sentence) {
  const auto &tokens = sentence.tokens;
  const auto args = argument_phrases(tokens);
  std::vector<SvoTriple> triples;

  size_t i = 0;
  while (i < tokens.size()) {
    size_t end = match_relation(tokens, i);
    if (end == i) {
      ++i;
      continue;
    }
    const Span relation{i, end};
    const Argumentish *subject = nullptr;
    const Argumentish *object = nullptr;
    for (const auto &a : args) {
      if (a.range.end <= relation.start && a.usable) subject = &a;
      if (!object && a.range.start >= relation.end) object = &a;
    }
    if (subject && object && object->usable) {
      triples.push_back({make_argument(sentence, subject->range),
                         make_argument(sentence, relation),
                         make_argument(sentence, object->range),
                         {sentence.doc_id, sentence.index}});
    }
    i = end;
  }
  return triples;
}

std::string triple_to_sentence(const SvoTriple &triple) {
  std::string text = triple.subject.text + " " + triple.verb_phrase.text + " " +
                     triple.object.text;
  if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') {
    text[0] = static_cast<char>(text[0] - 'a' + 'A');
  }
  char last = text.empty() ? '\0' : text.back();
  if (last != '.' && last != '!' && last != '?') text += '.';
  return text;
}

CandidateSet generate_candidates(std::span<const Sentence> retrieved) {
  CandidateSet set;
  std::set<std::string> seen;
  auto add = [&](Candidate c) {
    if (c.text.empty()) return;
    if (seen.insert(ascii_lower(c.text)).second) {
      set.candidates.push_back(std::move(c));
    }
  };
  for (const Sentence &s : retrieved) {
    add({s.text, CandidateKind::kRetrievedSentence, {s.doc_id, s.index}, std::nullopt});
  }
  for (const Sentence &s : retrieved) {
    for (SvoTriple &t : extract_triples(s)) {
      std::string text = triple_to_sentence(t);
      add({std::move(text), CandidateKind::kTripleSentence, t.source, std::move(t)});
    }
  }
  return set;
}

std::string CandidateSet::to_jsonl() const {
  std::string out;
  for (const Candidate &c : candidates) {
    json j = {{"text", c.text},
              {"kind", candidate_kind_name(c.kind)},
              {"doc_id", c.source.doc_id},
              {"sentence_index", c.source.index}};
    if (c.triple) {
      j["triple"] = {{"subject", argument_json(c.triple->subject)},
                     {"verb_phrase", argument_json(c.triple->verb_phrase)},
                     {"object", argument_json(c.triple->object)}};
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

CandidateSet CandidateSet::from_jsonl(std::string_view text) {
  CandidateSet set;
  size_t line_no = 0;
  for (const std::string &line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      json j = json::parse(line);
      Candidate c;
      c.text = j.at("text").get<std::string>();
      std::string kind = j.at("kind").get<std::string>();
      if (kind == "retrieved-sentence") {
        c.kind = CandidateKind::kRetrievedSentence;
      } else if (kind == "triple-sentence") {
        c.kind = CandidateKind::kTripleSentence;
      } else {
        throw DataError("unknown candidate kind '" + kind + "'");
      }
      c.source = {j.at("doc_id").get<std::string>(), j.at("sentence_index").get<size_t>()};
      if (j.contains("triple")) {
        const json &t = j["triple"];
        c.triple = SvoTriple{argument_from_json(t.at("subject")),
                             argument_from_json(t.at("verb_phrase")),
                             argument_from_json(t.at("object")), c.source};
      }
      if ((c.kind == CandidateKind::kTripleSentence) != c.triple.has_value()) {
        throw DataError("triple present iff kind is triple-sentence");
      }
      set.candidates.push_back(std::move(c));
    } catch (const json::exception &e) {
      throw DataError("candidates line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError &e) {
      throw DataError("candidates line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

}  // namespace docbot
