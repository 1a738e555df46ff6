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

#include "docbot/matcher.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "docbot/error.hpp"
#include "docbot/nn/optimizer.hpp"
#include "docbot/strings.hpp"

namespace docbot {

using nn::Shape;
using nn::Tape;
using nn::Tensor;
using nn::Var;

void HyperParams::validate() const {
  const std::pair<const char *, size_t> sizes[] = {
      {"embed_dim", embed_dim},         {"hidden_dim", hidden_dim},
      {"max_utterances", max_utterances}, {"max_tokens", max_tokens},
      {"match_dim", match_dim},         {"conv_filters", conv_filters},
      {"conv_kernel", conv_kernel},     {"pool_window", pool_window},
      {"pool_stride", pool_stride},     {"min_token_freq", min_token_freq},
      {"batch_size", batch_size},       {"patience", patience}};
  for (const auto &[name, v] : sizes) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  }
  if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be >= 0");
  }
  if (!(clip_norm >= 0)) throw ConfigError("clip_norm must be >= 0");
}

size_t HyperParams::image_size() const {
  return std::max(max_tokens, conv_kernel + pool_window - 1);
}

size_t HyperParams::pooled_features() const {
  const size_t conv_out = image_size() - conv_kernel + 1;
  const size_t side = (conv_out - pool_window) / pool_stride + 1;
  return conv_filters * side * side;
}

nlohmann::json HyperParams::to_json() const {
  return {{"embed_dim", embed_dim},
          {"hidden_dim", hidden_dim},
          {"max_utterances", max_utterances},
          {"max_tokens", max_tokens},
          {"match_dim", match_dim},
          {"conv_filters", conv_filters},
          {"conv_kernel", conv_kernel},
          {"pool_window", pool_window},
          {"pool_stride", pool_stride},
          {"min_token_freq", min_token_freq},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"patience", patience},
          {"learning_rate", learning_rate},
          {"clip_norm", clip_norm},
          {"seed", seed},
          {"self_match_enabled", self_match_enabled}};
}

HyperParams HyperParams::from_json(const nlohmann::json &j) {
  HyperParams hp;
  nlohmann::json known = hp.to_json();
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!known.contains(it.key())) throw ConfigError("unknown hyperparameter " + it.key());
    }
    auto get = [&](const char *key, auto &field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("embed_dim", hp.embed_dim);
    get("hidden_dim", hp.hidden_dim);
    get("max_utterances", hp.max_utterances);
    get("max_tokens", hp.max_tokens);
    get("match_dim", hp.match_dim);
    get("conv_filters", hp.conv_filters);
    get("conv_kernel", hp.conv_kernel);
    get("pool_window", hp.pool_window);
    get("pool_stride", hp.pool_stride);
    get("min_token_freq", hp.min_token_freq);
    get("batch_size", hp.batch_size);
    get("epochs", hp.epochs);
    get("patience", hp.patience);
    get("learning_rate", hp.learning_rate);
    get("clip_norm", hp.clip_norm);
    get("seed", hp.seed);
    get("self_match_enabled", hp.self_match_enabled);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("bad hyperparameters: ") + e.what());
  }
  hp.validate();
  return hp;
}

std::vector<int> encode_text(const Vocabulary &vocab, std::string_view text) {
  return vocab.encode(matcher_tokens(text));
}

namespace {

std::vector<int> keep_last(std::vector<int> ids, size_t n) {
  if (ids.size() > n) ids.erase(ids.begin(), ids.end() - static_cast<ptrdiff_t>(n));
  return ids;
}

}  // namespace

std::vector<std::vector<int>> truncate_context(std::vector<std::vector<int>> context,
                                               const HyperParams &hp) {
  std::vector<std::vector<int>> out;
  for (auto &u : context) {
    if (!u.empty()) out.push_back(keep_last(std::move(u), hp.max_tokens));
  }
  if (out.size() > hp.max_utterances) {
    out.erase(out.begin(), out.end() - static_cast<ptrdiff_t>(hp.max_utterances));
  }
  return out;
}

TrainingExample make_example(const DialogueExample &ex, const Vocabulary &vocab,
                             const HyperParams &hp) {
  TrainingExample out;
  std::vector<std::vector<int>> ctx;
  for (const auto &u : ex.context) ctx.push_back(encode_text(vocab, u));
  out.context = truncate_context(std::move(ctx), hp);
  out.response = keep_last(encode_text(vocab, ex.response), hp.max_tokens);
  out.label = ex.label;
  return out;
}

namespace {

Tensor xavier_shaped(Shape shape, size_t fan_in, size_t fan_out, Rng &rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor t(shape);
  for (double &v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

void add_matcher_parameters(nn::ParameterSet &params, const HyperParams &hp, size_t vocab_size,
                            Rng &rng) {
  hp.validate();
  const size_t E = hp.embed_dim, H = hp.hidden_dim, k = hp.conv_kernel;
  Tensor emb = nn::xavier_uniform(vocab_size, E, rng);
  for (size_t j = 0; j < E; ++j) emb.at(Vocabulary::kPad, j) = 0.0;
  params.add("embedding", std::move(emb));
  nn::add_gru_params(params, "enc", E, H, rng);
  params.add("sm.w1", nn::xavier_uniform(H, H, rng));
  params.add("sm.w2", nn::xavier_uniform(H, H, rng));
  params.add("sm.v", xavier_shaped(Shape{H}, H, 1, rng));
  params.add("sm.wg", nn::xavier_uniform(2 * H, 2 * H, rng));
  nn::add_gru_params(params, "sm.gru", 2 * H, H, rng);
  params.add("match.a", nn::xavier_uniform(H, H, rng));
  params.add("match.conv", xavier_shaped(Shape{hp.conv_filters, 2, k, k}, 2 * k * k,
                                         hp.conv_filters * k * k, rng));
  params.add("match.conv_b", Tensor(Shape{hp.conv_filters}));
  params.add("match.dense", nn::xavier_uniform(hp.pooled_features(), hp.match_dim, rng));
  params.add("match.dense_b", Tensor(Shape{hp.match_dim}));
  nn::add_gru_params(params, "acc", hp.match_dim, H, rng);
  params.add("out.w", xavier_shaped(Shape{H}, H, 1, rng));
  params.add("out.b", Tensor::scalar(0.0));
}

MatcherGraph::MatcherGraph(Tape &tape, const nn::ParameterSet &params, const HyperParams &hp,
                           nn::ParameterSet *trainable)
    : tape_(tape), params_(params), trainable_(trainable), hp_(hp) {
  embedding_ = bind("embedding");
  a_ = bind("match.a");
  conv_ = bind("match.conv");
  conv_b_ = bind("match.conv_b");
  dense_ = bind("match.dense");
  dense_b_ = bind("match.dense_b");
  out_w_ = bind("out.w");
  out_b_ = bind("out.b");
  auto gru = [&](const std::string &prefix) {
    return nn::GruVars{bind(prefix + ".wz"), bind(prefix + ".wr"), bind(prefix + ".wh"),
                       bind(prefix + ".uz"), bind(prefix + ".ur"), bind(prefix + ".uh"),
                       bind(prefix + ".bz"), bind(prefix + ".br"), bind(prefix + ".bh")};
  };
  enc_ = gru("enc");
  acc_ = gru("acc");
  // The ablation never touches the self-match block.
  if (hp.self_match_enabled) {
    w1_ = bind("sm.w1");
    w2_ = bind("sm.w2");
    v_ = bind("sm.v");
    wg_ = bind("sm.wg");
    sm_gru_ = gru("sm.gru");
  }
}

Var MatcherGraph::bind(const std::string &name) {
  if (trainable_) return tape_.parameter(trainable_->get(name));
  return tape_.constant(params_.get(name).value);
}

Var MatcherGraph::embed(std::span<const int> ids) {
  if (ids.empty()) throw ShapeError("cannot embed an empty token sequence");
  return nn::embedding_lookup(embedding_, ids);
}

Var MatcherGraph::encode_states(Var embedded) {
  return nn::gru_sequence(enc_, embedded, tape_.constant(Tensor(Shape{hp_.hidden_dim})));
}

Var MatcherGraph::self_match(Var states) {
  if (!hp_.self_match_enabled) throw UsageError("self-matching is disabled");
  const size_t T = states.shape()[0];
  Var keys = nn::matmul(states, w1_);
  Var queries = nn::matmul(states, w2_);
  std::vector<Var> contexts;
  contexts.reserve(T);
  for (size_t t = 0; t < T; ++t) {
    contexts.push_back(nn::additive_attention(keys, nn::row(queries, t), v_, states));
  }
  Var hc = nn::concat({states, nn::stack(contexts)}, 1);
  Var gated = nn::mul(nn::sigmoid(nn::matmul(hc, wg_)), hc);
  return nn::gru_sequence(sm_gru_, gated, tape_.constant(Tensor(Shape{hp_.hidden_dim})));
}

MatcherGraph::Encoded MatcherGraph::encode(std::span<const int> ids) {
  Encoded e;
  if (ids.empty()) return e;
  e.empty = false;
  e.embedded = embed(ids);
  e.states = encode_states(e.embedded);
  if (hp_.self_match_enabled) e.states = self_match(e.states);
  return e;
}

std::pair<Var, Var> MatcherGraph::similarity(const Encoded &u, const Encoded &r) {
  if (u.empty || r.empty) {
    Var zero = tape_.constant(Tensor(Shape{1, 1}));
    return {zero, zero};
  }
  Var m1 = nn::matmul(u.embedded, nn::transpose(r.embedded));
  Var m2 = nn::matmul(nn::matmul(u.states, a_), nn::transpose(r.states));
  return {m1, m2};
}

Var MatcherGraph::match_vector(Var m1, Var m2) {
  const size_t P = hp_.image_size();
  std::vector<Var> channels{nn::pad2d(m1, P, P), nn::pad2d(m2, P, P)};
  Var image = nn::stack(channels);
  Var pooled = nn::maxpool2d(nn::relu(nn::conv2d(image, conv_, conv_b_)), hp_.pool_window,
                             hp_.pool_stride);
  Var flat = nn::reshape(pooled, Shape{hp_.pooled_features()});
  return nn::tanh(nn::linear(flat, dense_, dense_b_));
}

Var MatcherGraph::logit(const std::vector<Encoded> &context, const Encoded &response) {
  std::vector<Var> vectors;
  Var rt_emb, rt_states;
  for (const auto &u : context) {
    if (u.empty) continue;
    Var m1, m2;
    if (response.empty) {
      std::tie(m1, m2) = similarity(u, response);
    } else {
      if (!rt_emb.valid()) {
        rt_emb = nn::transpose(response.embedded);
        rt_states = nn::transpose(response.states);
      }
      m1 = nn::matmul(u.embedded, rt_emb);
      m2 = nn::matmul(nn::matmul(u.states, a_), rt_states);
    }
    vectors.push_back(match_vector(m1, m2));
  }
  if (vectors.empty()) throw ValidationError("cannot score against an empty context");
  Var hs = nn::gru_sequence(acc_, nn::stack(vectors),
                            tape_.constant(Tensor(Shape{hp_.hidden_dim})));
  Var last = nn::row(hs, vectors.size() - 1);
  return nn::add(nn::matmul(last, out_w_), out_b_);
}

Var group_loss(MatcherGraph &graph, const std::vector<std::vector<int>> &context,
               const std::vector<std::vector<int>> &responses, const std::vector<int> &labels) {
  std::vector<MatcherGraph::Encoded> ctx;
  for (const auto &u : context) ctx.push_back(graph.encode(u));
  Var total;
  for (size_t i = 0; i < responses.size(); ++i) {
    Var l = nn::bce_with_logits(graph.logit(ctx, graph.encode(responses[i])),
                                static_cast<double>(labels[i]));
    total = total.valid() ? nn::add(total, l) : l;
  }
  return total;
}

MatcherModel::MatcherModel(HyperParams hp, Vocabulary vocab, nn::ParameterSet params)
    : hp_(hp), vocab_(std::move(vocab)), params_(std::move(params)) {
  hp_.validate();
  nn::ParameterSet reference;
  Rng rng(0);
  add_matcher_parameters(reference, hp_, vocab_.size(), rng);
  if (reference.size() != params_.size()) throw ModelError("matcher parameter count mismatch");
  for (size_t i = 0; i < reference.size(); ++i) {
    const auto &want = reference[i];
    const auto &have = params_.get(want.name);
    if (!(want.value.shape() == have.value.shape())) {
      throw ModelError("parameter " + want.name + " has shape " + have.value.shape().str() +
                       ", expected " + want.value.shape().str());
    }
  }
}

MatcherModel MatcherModel::initialize(const HyperParams &hp, Vocabulary vocab) {
  nn::ParameterSet params;
  Rng rng(hp.seed);
  add_matcher_parameters(params, hp, vocab.size(), rng);
  return MatcherModel(hp, std::move(vocab), std::move(params));
}

Tensor MatcherModel::encode_utterance(std::span<const int> ids) const {
  if (ids.empty()) return Tensor(Shape{1, hp_.hidden_dim});
  Tape tape(false);
  MatcherGraph g(tape, params_, hp_);
  return g.encode_states(g.embed(ids)).value();
}

Tensor MatcherModel::self_match(const Tensor &states) const {
  Tape tape(false);
  MatcherGraph g(tape, params_, hp_);
  return g.self_match(tape.constant(states)).value();
}

std::pair<Tensor, Tensor> MatcherModel::similarity_matrices(std::span<const int> utterance,
                                                            std::span<const int> response) const {
  Tape tape(false);
  MatcherGraph g(tape, params_, hp_);
  auto [m1, m2] = g.similarity(g.encode(utterance), g.encode(response));
  return {m1.value(), m2.value()};
}

Tensor MatcherModel::match_utterance(const Tensor &m1, const Tensor &m2) const {
  Tape tape(false);
  MatcherGraph g(tape, params_, hp_);
  return g.match_vector(tape.constant(m1), tape.constant(m2)).value();
}

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double MatcherModel::match_score(const std::vector<std::vector<int>> &context,
                                 std::span<const int> response) const {
  Tape tape(false);
  MatcherGraph g(tape, params_, hp_);
  std::vector<MatcherGraph::Encoded> ctx;
  for (const auto &u : context) ctx.push_back(g.encode(u));
  return sigmoid(g.logit(ctx, g.encode(response)).value().item());
}

double MatcherModel::score(const std::vector<std::string> &context,
                           const std::string &response) const {
  return score_candidates(context, {response}).front();
}

std::vector<double> MatcherModel::score_candidates(
    const std::vector<std::string> &context, const std::vector<std::string> &responses) const {
  std::vector<std::vector<int>> ids;
  for (const auto &u : context) ids.push_back(encode_text(vocab_, u));
  ids = truncate_context(std::move(ids), hp_);
  Tape tape(false);
  MatcherGraph g(tape, params_, hp_);
  std::vector<MatcherGraph::Encoded> ctx;
  for (const auto &u : ids) ctx.push_back(g.encode(u));
  std::vector<double> scores;
  scores.reserve(responses.size());
  for (const auto &r : responses) {
    std::vector<int> rid = keep_last(encode_text(vocab_, r), hp_.max_tokens);
    scores.push_back(sigmoid(g.logit(ctx, g.encode(rid)).value().item()));
  }
  return scores;
}

std::string MatcherModel::serialize() const {
  return params_.serialize(
      {{"kind", "matcher"}, {"hyperparams", hp_.to_json()}, {"vocabulary", vocab_.to_json()}});
}

MatcherModel MatcherModel::deserialize(std::string_view bytes) {
  auto [params, meta] = nn::ParameterSet::deserialize(bytes);
  if (meta.value("kind", "") != "matcher") throw ModelError("not a matcher model file");
  try {
    return MatcherModel(HyperParams::from_json(meta.at("hyperparams")),
                        Vocabulary::from_json(meta.at("vocabulary")), std::move(params));
  } catch (const ConfigError &e) {
    throw ModelError(e.what());
  } catch (const nlohmann::json::exception &e) {
    throw ModelError(std::string("malformed matcher manifest: ") + e.what());
  }
}

void MatcherModel::save(const std::string &path) const { write_file(path, serialize()); }

MatcherModel MatcherModel::load(const std::string &path) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const DataError &e) {
    throw ModelError(e.what());
  }
  try {
    return deserialize(bytes);
  } catch (const ModelError &e) {
    throw ModelError(path + ": " + e.what());
  }
}

Vocabulary build_matcher_vocab(const std::vector<DialogueExample> &train, size_t min_freq) {
  std::vector<std::vector<std::string>> corpus;
  for (const auto &ex : train) {
    for (const auto &u : ex.context) corpus.push_back(matcher_tokens(u));
    corpus.push_back(matcher_tokens(ex.response));
  }
  return Vocabulary::build(corpus, min_freq);
}

EvalReport evaluate_matcher(const MatcherModel &model, const std::vector<ExampleGroup> &groups,
                            const std::vector<int> &ks) {
  return evaluate_recall(
      groups, [&](const ExampleGroup &g) { return model.score_candidates(g.context, g.responses); },
      ks);
}

namespace {

struct PreparedGroup {
  std::vector<std::vector<int>> context;
  std::vector<std::vector<int>> responses;
  std::vector<int> labels;
};

double mean_loss(const MatcherModel &model, const std::vector<PreparedGroup> &groups,
                 size_t num_examples) {
  double total = 0;
  for (const auto &g : groups) {
    Tape tape(false);
    MatcherGraph graph(tape, model.params(), model.hyper());
    total += group_loss(graph, g.context, g.responses, g.labels).value().item();
  }
  return total / static_cast<double>(num_examples);
}

}  // namespace

TrainResult train_matcher(const std::vector<DialogueExample> &train, const HyperParams &hp,
                          const TrainOptions &options) {
  hp.validate();
  bool has_pos = false, has_neg = false;
  for (const auto &ex : train) (ex.label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw TrainingError("training data must contain both labels");

  Vocabulary vocab =
      options.vocab ? *options.vocab : build_matcher_vocab(train, hp.min_token_freq);
  std::vector<PreparedGroup> groups;
  for (const auto &g : group_by_context(train)) {
    PreparedGroup p;
    std::vector<std::vector<int>> ctx;
    for (const auto &u : g.context) ctx.push_back(encode_text(vocab, u));
    p.context = truncate_context(std::move(ctx), hp);
    if (p.context.empty()) throw DataError("training context without any known tokens");
    for (const auto &r : g.responses) p.responses.push_back(keep_last(encode_text(vocab, r), hp.max_tokens));
    p.labels = g.labels;
    groups.push_back(std::move(p));
  }

  TrainResult result{MatcherModel::initialize(hp, std::move(vocab)), {}, {}, 0};
  MatcherModel &model = result.model;
  result.loss_history.push_back(mean_loss(model, groups, train.size()));

  nn::OptimizerConfig oc;
  oc.algorithm = nn::Algorithm::kAdam;
  oc.lr = hp.learning_rate;
  oc.clip_norm = hp.clip_norm;
  nn::Optimizer opt(oc);
  Rng rng(hp.seed ^ 0x5eedf00dULL);
  std::vector<size_t> order(groups.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::optional<nn::ParameterSet> best;
  double best_recall = -1;
  size_t stale = 0;
  for (size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    rng.shuffle(std::span<size_t>(order));
    double epoch_loss = 0;
    for (size_t b = 0; b < order.size(); b += hp.batch_size) {
      const size_t end = std::min(order.size(), b + hp.batch_size);
      size_t batch_examples = 0;
      for (size_t i = b; i < end; ++i) batch_examples += groups[order[i]].labels.size();
      Tape tape;
      MatcherGraph graph(tape, model.params(), model.hyper(), &model.params());
      Var total;
      for (size_t i = b; i < end; ++i) {
        const auto &g = groups[order[i]];
        Var l = group_loss(graph, g.context, g.responses, g.labels);
        total = total.valid() ? nn::add(total, l) : l;
      }
      epoch_loss += total.value().item();
      tape.backward(nn::scale(total, 1.0 / static_cast<double>(batch_examples)));
      opt.step(model.params());
    }
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / static_cast<double>(train.size());
    result.loss_history.push_back(stats.train_loss);

    bool stop = false;
    if (options.valid) {
      const double r1 = evaluate_matcher(model, *options.valid, {1}).recalls.at(1);
      stats.valid_recall = r1;
      result.valid_history.push_back(r1);
      if (r1 > best_recall) {
        best_recall = r1;
        best = model.params();
        result.best_epoch = epoch;
        stale = 0;
      } else if (++stale >= hp.patience) {
        stop = true;
      }
    } else {
      result.best_epoch = epoch;
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (options.on_epoch && !options.on_epoch(stats)) stop = true;
    if (stop) break;
  }
  if (best) model.params() = std::move(*best);
  return result;
}

}  // namespace docbot
