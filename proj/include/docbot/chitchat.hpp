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

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docbot/nn/layers.hpp"
#include "docbot/nn/parameters.hpp"
#include "docbot/vocabulary.hpp"
#include "json.hpp"

namespace docbot {

struct ChitchatPair {
  std::string query;
  std::string reply;
  bool operator==(const ChitchatPair &) const = default;
};

// JSON lines {"query", "reply"}; DataError names the failing line.
std::vector<ChitchatPair> parse_pairs_jsonl(std::string_view content);
std::vector<ChitchatPair> load_pairs_jsonl(const std::string &path);

// Lowercased word and punctuation tokens.
std::vector<std::string> chitchat_tokens(std::string_view text);
std::string detokenize(const std::vector<std::string> &tokens);

struct Seq2SeqHyper {
  size_t embed_dim = 32;
  size_t hidden_dim = 32;
  size_t max_tokens = 20;  // query and reply truncation in training
  size_t min_token_freq = 1;
  size_t batch_size = 8;
  size_t epochs = 30;
  double learning_rate = 5e-3;
  double clip_norm = 5.0;
  uint64_t seed = 1;

  void validate() const;
  nlohmann::json to_json() const;
  static Seq2SeqHyper from_json(const nlohmann::json &j);
};

struct DecodeConfig {
  enum class Strategy { kGreedy, kBeam };
  Strategy strategy = Strategy::kGreedy;
  size_t beam_width = 1;
  size_t max_len = 20;

  void validate() const;
};

class Seq2SeqModel {
 public:
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;

  Seq2SeqModel(Seq2SeqHyper hp, Vocabulary vocab, nn::ParameterSet params);
  static Seq2SeqModel initialize(const Seq2SeqHyper &hp, Vocabulary vocab);
  // PAD, UNK, BOS and EOS followed by the corpus tokens.
  static Vocabulary build_vocab(const std::vector<ChitchatPair> &pairs, size_t min_freq);

  const Seq2SeqHyper &hyper() const { return hp_; }
  const Vocabulary &vocab() const { return vocab_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

  // Query ids as fed to the encoder: truncated tokens plus EOS.
  std::vector<int> encode_query(std::string_view text) const;
  std::vector<int> encode_reply(std::string_view text) const;

  // Token ids of the reply, without EOS. Never yields PAD or BOS.
  std::vector<int> decode(std::span<const int> query, const DecodeConfig &cfg) const;
  std::string generate(std::string_view query, const DecodeConfig &cfg) const;

  std::string serialize() const;
  static Seq2SeqModel deserialize(std::string_view bytes);
  void save(const std::string &path) const;
  static Seq2SeqModel load(const std::string &path);

 private:
  Seq2SeqHyper hp_;
  Vocabulary vocab_;
  nn::ParameterSet params_;
};

void add_seq2seq_parameters(nn::ParameterSet &params, const Seq2SeqHyper &hp, size_t vocab_size,
                            Rng &rng);

// Teacher-forced cross-entropy summed over the reply tokens and the final
// EOS. Parameters are bound from `params` for gradient accumulation.
nn::Var seq2seq_loss(nn::Tape &tape, nn::ParameterSet &params, std::span<const int> query,
                     std::span<const int> reply);

struct Seq2SeqTrainResult {
  Seq2SeqModel model;
  // Mean per-token loss; element 0 is measured before any update.
  std::vector<double> loss_history;
};

// Duplicate pairs are dropped first. Throws TrainingError on an empty
// corpus. The callback receives (epoch, loss) and may stop training by
// returning false.
Seq2SeqTrainResult train_seq2seq(const std::vector<ChitchatPair> &pairs, const Seq2SeqHyper &hp,
                                 std::function<bool(size_t, double)> on_epoch = {});

// Generator with a canned-response floor. Replies rotate through the
// canned list whenever no model is loaded or the model produces nothing.
class ChitchatEngine {
 public:
  ChitchatEngine(std::vector<std::string> canned, DecodeConfig cfg = {});

  void set_model(std::shared_ptr<const Seq2SeqModel> model) { model_ = std::move(model); }
  bool has_model() const { return model_ != nullptr; }
  const DecodeConfig &decode_config() const { return cfg_; }

  std::string reply(std::string_view query);

 private:
  std::vector<std::string> canned_;
  DecodeConfig cfg_;
  std::shared_ptr<const Seq2SeqModel> model_;
  std::atomic<size_t> next_{0};
};

// Reads one response per non-empty line; '#' starts a comment line.
std::vector<std::string> load_canned_responses(const std::string &path);

}  // namespace docbot
