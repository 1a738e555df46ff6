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

#include "docbot/gradient_suite.hpp"

#include <string>

#include "docbot/chitchat.hpp"
#include "docbot/matcher.hpp"
#include "docbot/rng.hpp"

namespace docbot {
namespace {

void randomize(nn::ParameterSet &ps, uint64_t seed, double bound) {
  Rng rng(seed);
  for (auto &p : ps) {
    for (double &v : p->value.data()) v = rng.uniform(-bound, bound);
  }
}

nn::GradCheckResult matcher_check(bool self_match, uint64_t seed) {
  HyperParams hp;
  hp.embed_dim = 4;
  hp.hidden_dim = 4;
  hp.match_dim = 3;
  hp.max_tokens = 5;
  hp.max_utterances = 4;
  hp.seed = seed;
  hp.self_match_enabled = self_match;
  Vocabulary vocab;
  while (vocab.size() < 16) vocab.add("w" + std::to_string(vocab.size()));
  MatcherModel m = MatcherModel::initialize(hp, vocab);
  randomize(m.params(), seed + 1, 0.8);
  const std::vector<std::vector<int>> ctx{{3, 12, 5}, {8, 4}};
  const std::vector<std::vector<int>> resp{{11, 6}, {2, 9, 13}};
  return nn::check_gradients(self_match ? "matcher_loss" : "matcher_loss_no_self_match",
                             m.params(), [&](nn::Tape &t, nn::ParameterSet &p) {
                               MatcherGraph g(t, p, hp, &p);
                               return group_loss(g, ctx, resp, {1, 0});
                             });
}

nn::GradCheckResult seq2seq_check(uint64_t seed) {
  Seq2SeqHyper hp;
  hp.embed_dim = 4;
  hp.hidden_dim = 4;
  hp.seed = seed;
  Vocabulary vocab({"<bos>", "<eos>"});
  while (vocab.size() < 10) vocab.add("w" + std::to_string(vocab.size()));
  Seq2SeqModel m = Seq2SeqModel::initialize(hp, vocab);
  randomize(m.params(), seed + 2, 0.7);
  const std::vector<int> query{4, 7, Seq2SeqModel::kEos};
  const std::vector<int> reply{5, 9};
  return nn::check_gradients("seq2seq_loss", m.params(), [&](nn::Tape &t, nn::ParameterSet &p) {
    return seq2seq_loss(t, p, query, reply);
  });
}

}  // namespace

std::vector<nn::GradCheckResult> full_gradient_suite(uint64_t seed) {
  std::vector<nn::GradCheckResult> out = nn::layer_gradient_suite(seed);
  out.push_back(matcher_check(true, seed));
  out.push_back(matcher_check(false, seed));
  out.push_back(seq2seq_check(seed));
  return out;
}

}  // namespace docbot
