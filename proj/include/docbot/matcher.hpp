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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "docbot/dialogue_data.hpp"
#include "docbot/nn/layers.hpp"
#include "docbot/nn/parameters.hpp"
#include "docbot/recall.hpp"
#include "docbot/vocabulary.hpp"
#include "json.hpp"

namespace docbot {

struct HyperParams {
  size_t embed_dim = 100;
  size_t hidden_dim = 100;
  size_t max_utterances = 10;
  size_t max_tokens = 50;
  size_t match_dim = 50;
  size_t conv_filters = 8;
  size_t conv_kernel = 3;
  size_t pool_window = 3;
  size_t pool_stride = 3;
  size_t min_token_freq = 2;
  size_t batch_size = 16;
  size_t epochs = 10;
  size_t patience = 3;
  double learning_rate = 1e-3;
  double clip_norm = 5.0;
  uint64_t seed = 1;
  bool self_match_enabled = true;

  void validate() const;
  // Side of the zero-padded similarity image.
  size_t image_size() const;
  size_t pooled_features() const;

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys are rejected.
  static HyperParams from_json(const nlohmann::json &j);
};

// Token ids after truncation. Empty utterances are dropped before the
// last `max_utterances` are kept; each utterance and the response keep
// their last `max_tokens` ids.
struct TrainingExample {
  std::vector<std::vector<int>> context;
  std::vector<int> response;
  int label = 0;
};

std::vector<int> encode_text(const Vocabulary &vocab, std::string_view text);
std::vector<std::vector<int>> truncate_context(std::vector<std::vector<int>> context,
                                               const HyperParams &hp);
TrainingExample make_example(const DialogueExample &ex, const Vocabulary &vocab,
                             const HyperParams &hp);

// Registers every matcher parameter: "embedding", GRU "enc", the
// self-match block "sm.*", "match.*", GRU "acc" and "out.*".
void add_matcher_parameters(nn::ParameterSet &params, const HyperParams &hp,
                            size_t vocab_size, Rng &rng);

// The forward computation bound to one tape. With `trainable` set, the
// parameters are bound for gradient accumulation; otherwise their values
// enter as constants.
class MatcherGraph {
 public:
  struct Encoded {
    nn::Var embedded;  // [T,E]
    nn::Var states;    // [T,H] after self-matching when enabled
    bool empty = true;
  };

  MatcherGraph(nn::Tape &tape, const nn::ParameterSet &params, const HyperParams &hp,
               nn::ParameterSet *trainable = nullptr);

  nn::Tape &tape() { return tape_; }

  // GRU states over the embedded ids, [T,H]. ids must be non-empty.
  nn::Var embed(std::span<const int> ids);
  nn::Var encode_states(nn::Var embedded);
  nn::Var self_match(nn::Var states);
  Encoded encode(std::span<const int> ids);

  // Unpadded [T_u,T_r] matrices; 1x1 zeros when either side is empty.
  std::pair<nn::Var, nn::Var> similarity(const Encoded &u, const Encoded &r);
  nn::Var match_vector(nn::Var m1, nn::Var m2);

  // Logit of the matching probability. Throws ValidationError when every
  // context utterance is empty.
  nn::Var logit(const std::vector<Encoded> &context, const Encoded &response);

 private:
  nn::Var bind(const std::string &name);

  nn::Tape &tape_;
  const nn::ParameterSet &params_;
  nn::ParameterSet *trainable_;
  const HyperParams &hp_;
  nn::Var embedding_, w1_, w2_, v_, wg_, a_, conv_, conv_b_, dense_, dense_b_, out_w_, out_b_;
  nn::GruVars enc_, sm_gru_, acc_;
};

class MatcherModel {
 public:
  MatcherModel(HyperParams hp, Vocabulary vocab, nn::ParameterSet params);
  static MatcherModel initialize(const HyperParams &hp, Vocabulary vocab);

  const HyperParams &hyper() const { return hp_; }
  const Vocabulary &vocab() const { return vocab_; }
  nn::ParameterSet &params() { return params_; }
  const nn::ParameterSet &params() const { return params_; }

  // Component views, forward only.
  nn::Tensor encode_utterance(std::span<const int> ids) const;
  nn::Tensor self_match(const nn::Tensor &states) const;
  std::pair<nn::Tensor, nn::Tensor> similarity_matrices(std::span<const int> utterance,
                                                        std::span<const int> response) const;
  nn::Tensor match_utterance(const nn::Tensor &m1, const nn::Tensor &m2) const;

  double match_score(const std::vector<std::vector<int>> &context,
                     std::span<const int> response) const;
  double score(const std::vector<std::string> &context, const std::string &response) const;
  // Encodes the context once for all candidates.
  std::vector<double> score_candidates(const std::vector<std::string> &context,
                                       const std::vector<std::string> &responses) const;

  std::string serialize() const;
  static MatcherModel deserialize(std::string_view bytes);
  void save(const std::string &path) const;
  static MatcherModel load(const std::string &path);

 private:
  HyperParams hp_;
  Vocabulary vocab_;
  nn::ParameterSet params_;
};

// Sum of binary cross-entropies over one group's candidates.
nn::Var group_loss(MatcherGraph &graph, const std::vector<std::vector<int>> &context,
                   const std::vector<std::vector<int>> &responses, const std::vector<int> &labels);

struct EpochStats {
  size_t epoch = 0;
  double train_loss = 0;
  std::optional<double> valid_recall;
  double seconds = 0;
};

struct TrainResult {
  MatcherModel model;
  // Element 0 is the mean loss of the initial parameters; element e is the
  // mean loss observed during epoch e.
  std::vector<double> loss_history;
  std::vector<double> valid_history;  // R_n@1 after each epoch
  size_t best_epoch = 0;
};

struct TrainOptions {
  const std::vector<ExampleGroup> *valid = nullptr;
  // Used as-is when set; otherwise built from the training texts.
  const Vocabulary *vocab = nullptr;
  // Return false to stop after this epoch.
  std::function<bool(const EpochStats &)> on_epoch;
};

// Adam on mean binary cross-entropy over minibatches of context groups.
// With a validation set, stops after `patience` epochs without R_n@1
// improvement and returns the best parameters.
TrainResult train_matcher(const std::vector<DialogueExample> &train, const HyperParams &hp,
                          const TrainOptions &options = {});

Vocabulary build_matcher_vocab(const std::vector<DialogueExample> &train, size_t min_freq);

EvalReport evaluate_matcher(const MatcherModel &model, const std::vector<ExampleGroup> &groups,
                            const std::vector<int> &ks);

}  // namespace docbot
