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
#include <string>
#include <vector>

#include "docbot/dialogue_data.hpp"
#include "docbot/text_prep.hpp"

namespace docbot {

struct SyntheticConfig {
  size_t train_contexts = 5000;
  size_t eval_contexts = 500;  // each for the validation and the test split
  size_t candidates = 10;      // per evaluation context
  uint64_t seed = 7;
};

struct SyntheticCorpus {
  std::vector<DialogueExample> train;  // one positive and one negative per context
  std::vector<DialogueExample> valid;  // `candidates` lines per context
  std::vector<DialogueExample> test;
};

// Templated product-QA dialogues. The latest user turn asks about one
// attribute of a product named earlier in the dialogue, often elliptically;
// the answer wording shares no content words with the question. Negatives
// answer another attribute of the same product, the same attribute of
// another product, or something unrelated. Fully determined by the seed.
SyntheticCorpus generate_corpus(const SyntheticConfig &cfg);

// Writes train.jsonl, valid.jsonl and test.jsonl into `dir`, creating it.
void write_corpus(const SyntheticCorpus &corpus, const std::string &dir);

// A question answered by one sentence of a document, as JSON lines
// {"question": string, "sentence": index}.
struct DocumentQuestion {
  std::string question;
  size_t sentence = 0;
};

std::vector<DocumentQuestion> parse_document_questions(std::string_view jsonl);
std::vector<DocumentQuestion> load_document_questions(const std::string &path);

// Training pairs grounded in a preprocessed document: `repeats` contexts per
// question ending in that question, each with one positive (the answer
// sentence or one of its triple sentences) and one negative taken from the
// other sentences. Throws DataError for out-of-range sentence indexes.
std::vector<DialogueExample> document_examples(const std::vector<Sentence> &sentences,
                                               const std::vector<DocumentQuestion> &questions,
                                               size_t repeats, uint64_t seed);

}  // namespace docbot
