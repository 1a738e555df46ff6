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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docbot/retrieval.hpp"
#include "docbot/text_prep.hpp"

namespace docbot {

// A token range of the source sentence together with its text.
struct Argument {
  Span tokens;
  std::string text;

  bool operator==(const Argument &) const = default;
};

struct SvoTriple {
  Argument subject;
  Argument verb_phrase;
  Argument object;
  SentenceRef source;

  bool operator==(const SvoTriple &) const = default;
};

enum class CandidateKind { kRetrievedSentence, kTripleSentence };

std::string_view candidate_kind_name(CandidateKind kind);

struct Candidate {
  std::string text;
  CandidateKind kind = CandidateKind::kRetrievedSentence;
  SentenceRef source;
  std::optional<SvoTriple> triple;  // present iff kind is kTripleSentence
};

// Retrieved sentences first, then triple sentences, each in source order,
// unique under ASCII case folding.
struct CandidateSet {
  std::vector<Candidate> candidates;

  size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }

  std::string to_jsonl() const;
  static CandidateSet from_jsonl(std::string_view text);
};

// Relation phrases follow the verb-phrase pattern V | V P | V W* P over the
// POS tags; arguments are the nearest noun phrases on each side.
std::vector<SvoTriple> extract_triples(const Sentence &sentence);

// "subject verb_phrase object", first letter capitalized, with a single
// terminal period.
std::string triple_to_sentence(const SvoTriple &triple);

CandidateSet generate_candidates(std::span<const Sentence> retrieved);

}  // namespace docbot
