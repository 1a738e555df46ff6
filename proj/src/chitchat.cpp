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

#include "docbot/chitchat.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "docbot/error.hpp"
#include "docbot/nn/optimizer.hpp"
#include "docbot/strings.hpp"
#include "docbot/text_prep.hpp"

namespace docbot {

using nn::Shape;
using nn::Tape;
using nn::Tensor;
using nn::Var;

std::vector<ChitchatPair> parse_pairs_jsonl(std::string_view content) {
  std::vector<ChitchatPair> out;
  size_t line_no = 0;
  for (const auto &line : split(content, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      out.push_back({j.at("query").get<std::string>(), j.at("reply").get<std::string>()});
    } catch (const nlohmann::json::exception &e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<ChitchatPair> load_pairs_jsonl(const std::string &path) {
  try {
    return parse_pairs_jsonl(read_file(path));
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<std::string> chitchat_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto &t : tokenize(text)) out.push_back(ascii_lower(t.surface));
  return out;
}

std::string detokenize(const std::vector<std::string> &tokens) {
  static const std::set<std::string> kAttach = {".", ",", "!", "?", ";", ":", "'s", "n't", ")"};
  std::string out;
  for (const auto &t : tokens) {
    if (!out.empty() && !kAttach.count(t) && out.back() != '(') out += ' ';
    out += t;
  }
  return out;
}

void Seq2SeqHyper::validate() const {
  if (embed_dim == 0 || hidden_dim == 0 || max_tokens == 0 || batch_size == 0 ||
      min_token_freq == 0) {
    throw ConfigError("seq2seq sizes must be positive");
  }
  if (!(learning_rate >= 0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be >= 0");
  }
  if (!(clip_norm >= 0)) throw ConfigError("clip_norm must be >= 0");
}

nlohmann::json Seq2SeqHyper::to_json() const {
  return {{"embed_dim", embed_dim},         {"hidden_dim", hidden_dim},
          {"max_tokens", max_tokens},       {"min_token_freq", min_token_freq},
          {"batch_size", batch_size},       {"epochs", epochs},
          {"learning_rate", learning_rate}, {"clip_norm", clip_norm},
          {"seed", seed}};
}

Seq2SeqHyper Seq2SeqHyper::from_json(const nlohmann::json &j) {
  Seq2SeqHyper hp;
  try {
    hp.embed_dim = j.value("embed_dim", hp.embed_dim);
    hp.hidden_dim = j.value("hidden_dim", hp.hidden_dim);
    hp.max_tokens = j.value("max_tokens", hp.max_tokens);
    hp.min_token_freq = j.value("min_token_freq", hp.min_token_freq);
    hp.batch_size = j.value("batch_size", hp.batch_size);
    hp.epochs = j.value("epochs", hp.epochs);
    hp.learning_rate = j.value("learning_rate", hp.learning_rate);
    hp.clip_norm = j.value("clip_norm", hp.clip_norm);
    hp.seed = j.value("seed", hp.seed);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("bad seq2seq hyperparameters: ") + e.what());
  }
  hp.validate();
  return hp;
}

void DecodeConfig::validate() const {
  if (beam_width < 1) throw ConfigError("beam width must be at least 1");
  if (max_len < 1) throw ConfigError("max_len must be at least 1");
}

void add_seq2seq_parameters(nn::ParameterSet &params, const Seq2SeqHyper &hp, size_t vocab_size,
                            Rng &rng) {
  const size_t E = hp.embed_dim, H = hp.hidden_dim;
  params.add("embedding", nn::xavier_uniform(vocab_size, E, rng));
  nn::add_gru_params(params, "enc", E, H, rng);
  nn::add_gru_params(params, "dec", E, H, rng);
  params.add("att.we", nn::xavier_uniform(H, H, rng));
  params.add("att.wd", nn::xavier_uniform(H, H, rng));
  Tensor v = nn::xavier_uniform(H, 1, rng);
  params.add("att.v", Tensor(Shape{H}, v.values()));
  params.add("out.w", nn::xavier_uniform(2 * H, vocab_size, rng));
  params.add("out.b", Tensor(Shape{vocab_size}));
}

namespace {

class Seq2SeqGraph {
 public:
  Seq2SeqGraph(Tape &tape, const nn::ParameterSet &params, nn::ParameterSet *trainable)
      : tape_(tape), params_(params), trainable_(trainable) {
    emb_ = bind("embedding");
    we_ = bind("att.we");
    wd_ = bind("att.wd");
    v_ = bind("att.v");
    ow_ = bind("out.w");
    ob_ = bind("out.b");
    enc_ = gru("enc");
    dec_ = gru("dec");
  }

  struct Memory {
    Var states, keys, last;
  };

  Memory encode(std::span<const int> query) {
    if (query.empty()) throw ShapeError("seq2seq query must not be empty");
    Memory m;
    Var x = nn::embedding_lookup(emb_, query);
    m.states = nn::gru_sequence(enc_, x, tape_.constant(Tensor(Shape{enc_.hidden()})));
    m.keys = nn::matmul(m.states, we_);
    m.last = nn::row(m.states, query.size() - 1);
    return m;
  }

  // Logits [T,V] for teacher-forced decoder inputs.
  Var teacher_logits(const Memory &m, std::span<const int> inputs) {
    Var hs = nn::gru_sequence(dec_, nn::embedding_lookup(emb_, inputs), m.last);
    Var queries = nn::matmul(hs, wd_);
    std::vector<Var> ctx;
    for (size_t t = 0; t < inputs.size(); ++t) {
      ctx.push_back(nn::additive_attention(m.keys, nn::row(queries, t), v_, m.states));
    }
    return nn::linear(nn::concat({hs, nn::stack(ctx)}, 1), ow_, ob_);
  }

  // One decoder step; returns log-probabilities and updates h.
  Var step(const Memory &m, int prev, Var *h) {
    std::vector<int> one{prev};
    *h = nn::gru_step(dec_, nn::row(nn::embedding_lookup(emb_, one), 0), *h);
    Var c = nn::additive_attention(m.keys, nn::matmul(*h, wd_), v_, m.states);
    return nn::log_softmax(nn::linear(nn::concat({*h, c}, 0), ow_, ob_));
  }

 private:
  Var bind(const std::string &name) {
    if (trainable_) return tape_.parameter(trainable_->get(name));
    return tape_.constant(params_.get(name).value);
  }
  nn::GruVars gru(const std::string &p) {
    return nn::GruVars{bind(p + ".wz"), bind(p + ".wr"), bind(p + ".wh"),
                       bind(p + ".uz"), bind(p + ".ur"), bind(p + ".uh"),
                       bind(p + ".bz"), bind(p + ".br"), bind(p + ".bh")};
  }

  Tape &tape_;
  const nn::ParameterSet &params_;
  nn::ParameterSet *trainable_;
  Var emb_, we_, wd_, v_, ow_, ob_;
  nn::GruVars enc_, dec_;
};

std::vector<int> truncated_ids(const Vocabulary &vocab, std::string_view text, size_t max) {
  std::vector<int> ids = vocab.encode(chitchat_tokens(text));
  if (ids.size() > max) ids.resize(max);
  return ids;
}

bool maskable(int id) {
  return id == Vocabulary::kPad || id == Vocabulary::kUnk || id == Seq2SeqModel::kBos;
}

}  // namespace

Var seq2seq_loss(Tape &tape, nn::ParameterSet &params, std::span<const int> query,
                 std::span<const int> reply) {
  Seq2SeqGraph g(tape, params, &params);
  auto mem = g.encode(query);
  std::vector<int> inputs{Seq2SeqModel::kBos};
  inputs.insert(inputs.end(), reply.begin(), reply.end());
  Var logits = g.teacher_logits(mem, inputs);
  Var total;
  for (size_t t = 0; t < inputs.size(); ++t) {
    const int target = t < reply.size() ? reply[t] : Seq2SeqModel::kEos;
    Var l = nn::cross_entropy(nn::row(logits, t), static_cast<size_t>(target));
    total = total.valid() ? nn::add(total, l) : l;
  }
  return total;
}

Seq2SeqModel::Seq2SeqModel(Seq2SeqHyper hp, Vocabulary vocab, nn::ParameterSet params)
    : hp_(hp), vocab_(std::move(vocab)), params_(std::move(params)) {
  hp_.validate();
  if (vocab_.size() < 5 || vocab_.token(kBos) != "<bos>" || vocab_.token(kEos) != "<eos>") {
    throw ModelError("seq2seq vocabulary lacks its reserved entries");
  }
  nn::ParameterSet reference;
  Rng rng(0);
  add_seq2seq_parameters(reference, hp_, vocab_.size(), rng);
  if (reference.size() != params_.size()) throw ModelError("seq2seq parameter count mismatch");
  for (size_t i = 0; i < reference.size(); ++i) {
    const auto &have = params_.get(reference[i].name);
    if (!(have.value.shape() == reference[i].value.shape())) {
      throw ModelError("parameter " + have.name + " has shape " + have.value.shape().str());
    }
  }
}

Seq2SeqModel Seq2SeqModel::initialize(const Seq2SeqHyper &hp, Vocabulary vocab) {
  nn::ParameterSet params;
  Rng rng(hp.seed);
  add_seq2seq_parameters(params, hp, vocab.size(), rng);
  return Seq2SeqModel(hp, std::move(vocab), std::move(params));
}

Vocabulary Seq2SeqModel::build_vocab(const std::vector<ChitchatPair> &pairs, size_t min_freq) {
  std::vector<std::vector<std::string>> corpus;
  for (const auto &p : pairs) {
    corpus.push_back(chitchat_tokens(p.query));
    corpus.push_back(chitchat_tokens(p.reply));
  }
  return Vocabulary::build(corpus, min_freq, {"<bos>", "<eos>"});
}

std::vector<int> Seq2SeqModel::encode_query(std::string_view text) const {
  std::vector<int> ids = truncated_ids(vocab_, text, hp_.max_tokens);
  ids.push_back(kEos);
  return ids;
}

std::vector<int> Seq2SeqModel::encode_reply(std::string_view text) const {
  return truncated_ids(vocab_, text, hp_.max_tokens);
}

std::vector<int> Seq2SeqModel::decode(std::span<const int> query, const DecodeConfig &cfg) const {
  cfg.validate();
  Tape tape(false);
  Seq2SeqGraph g(tape, params_, nullptr);
  auto mem = g.encode(query);
  const size_t V = vocab_.size();

  struct Beam {
    std::vector<int> tokens;
    double score = 0;
    Var h;
    bool done = false;
  };
  const size_t width = cfg.strategy == DecodeConfig::Strategy::kGreedy ? 1 : cfg.beam_width;
  std::vector<Beam> beams{Beam{{}, 0.0, mem.last, false}};

  for (size_t step = 0; step < cfg.max_len; ++step) {
    struct Cand {
      size_t parent;
      int token;  // -1 keeps a finished beam
      double score, logp;
    };
    std::vector<Cand> cands;
    std::vector<Var> next_h(beams.size());
    for (size_t b = 0; b < beams.size(); ++b) {
      if (beams[b].done) {
        cands.push_back({b, -1, beams[b].score, 0.0});
        continue;
      }
      Var h = beams[b].h;
      const int prev = beams[b].tokens.empty() ? kBos : beams[b].tokens.back();
      Var logp = g.step(mem, prev, &h);
      next_h[b] = h;
      for (size_t v = 0; v < V; ++v) {
        if (maskable(static_cast<int>(v))) continue;
        const double lp = logp.value()[v];
        cands.push_back({b, static_cast<int>(v), beams[b].score + lp, lp});
      }
    }
    // Total score, then step log-probability, then parent and token order.
    std::stable_sort(cands.begin(), cands.end(), [](const Cand &a, const Cand &b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.logp != b.logp) return a.logp > b.logp;
      if (a.parent != b.parent) return a.parent < b.parent;
      return a.token < b.token;
    });
    std::vector<Beam> next;
    for (const auto &c : cands) {
      if (next.size() == width) break;
      Beam nb = beams[c.parent];
      if (c.token >= 0) {
        nb.h = next_h[c.parent];
        nb.score = c.score;
        if (c.token == kEos) {
          nb.done = true;
        } else {
          nb.tokens.push_back(c.token);
        }
      }
      next.push_back(std::move(nb));
    }
    beams = std::move(next);
    if (std::all_of(beams.begin(), beams.end(), [](const Beam &b) { return b.done; })) break;
  }
  return beams.front().tokens;
}

std::string Seq2SeqModel::generate(std::string_view query, const DecodeConfig &cfg) const {
  std::vector<std::string> words;
  for (int id : decode(encode_query(query), cfg)) words.push_back(vocab_.token(id));
  return detokenize(words);
}

std::string Seq2SeqModel::serialize() const {
  return params_.serialize(
      {{"kind", "seq2seq"}, {"hyperparams", hp_.to_json()}, {"vocabulary", vocab_.to_json()}});
}

Seq2SeqModel Seq2SeqModel::deserialize(std::string_view bytes) {
  auto [params, meta] = nn::ParameterSet::deserialize(bytes);
  if (meta.value("kind", "") != "seq2seq") throw ModelError("not a seq2seq model file");
  try {
    return Seq2SeqModel(Seq2SeqHyper::from_json(meta.at("hyperparams")),
                        Vocabulary::from_json(meta.at("vocabulary")), std::move(params));
  } catch (const ConfigError &e) {
    throw ModelError(e.what());
  } catch (const nlohmann::json::exception &e) {
    throw ModelError(std::string("malformed seq2seq manifest: ") + e.what());
  }
}

void Seq2SeqModel::save(const std::string &path) const { write_file(path, serialize()); }

Seq2SeqModel Seq2SeqModel::load(const std::string &path) {
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

Seq2SeqTrainResult train_seq2seq(const std::vector<ChitchatPair> &pairs, const Seq2SeqHyper &hp,
                                 std::function<bool(size_t, double)> on_epoch) {
  hp.validate();
  std::vector<ChitchatPair> unique;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto &p : pairs) {
    if (seen.insert({p.query, p.reply}).second) unique.push_back(p);
  }
  if (unique.empty()) throw TrainingError("chit-chat corpus is empty");

  Seq2SeqTrainResult result{
      Seq2SeqModel::initialize(hp, Seq2SeqModel::build_vocab(unique, hp.min_token_freq)), {}};
  Seq2SeqModel &model = result.model;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> data;
  size_t total_tokens = 0;
  for (const auto &p : unique) {
    data.emplace_back(model.encode_query(p.query), model.encode_reply(p.reply));
    total_tokens += data.back().second.size() + 1;
  }

  {
    double loss = 0;
    for (const auto &[q, r] : data) {
      Tape tape(false);
      loss += seq2seq_loss(tape, model.params(), q, r).value().item();
    }
    result.loss_history.push_back(loss / static_cast<double>(total_tokens));
  }

  nn::OptimizerConfig oc;
  oc.lr = hp.learning_rate;
  oc.clip_norm = hp.clip_norm;
  nn::Optimizer opt(oc);
  Rng rng(hp.seed ^ 0xc4a7ULL);
  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (size_t epoch = 1; epoch <= hp.epochs; ++epoch) {
    rng.shuffle(std::span<size_t>(order));
    double loss = 0;
    for (size_t b = 0; b < order.size(); b += hp.batch_size) {
      const size_t end = std::min(order.size(), b + hp.batch_size);
      Tape tape;
      Var total;
      size_t tokens = 0;
      for (size_t i = b; i < end; ++i) {
        const auto &[q, r] = data[order[i]];
        Var l = seq2seq_loss(tape, model.params(), q, r);
        total = total.valid() ? nn::add(total, l) : l;
        tokens += r.size() + 1;
      }
      loss += total.value().item();
      tape.backward(nn::scale(total, 1.0 / static_cast<double>(tokens)));
      opt.step(model.params());
    }
    result.loss_history.push_back(loss / static_cast<double>(total_tokens));
    if (on_epoch && !on_epoch(epoch, result.loss_history.back())) break;
  }
  return result;
}

ChitchatEngine::ChitchatEngine(std::vector<std::string> canned, DecodeConfig cfg)
    : canned_(std::move(canned)), cfg_(cfg) {
  cfg_.validate();
  if (canned_.empty()) throw ConfigError("at least one canned response is required");
}

std::string ChitchatEngine::reply(std::string_view query) {
  if (model_) {
    std::string text = model_->generate(query, cfg_);
    if (!text.empty()) return text;
  }
  return canned_[next_.fetch_add(1) % canned_.size()];
}

std::vector<std::string> load_canned_responses(const std::string &path) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ConfigError(path + ": no canned responses");
  return lines;
}

}  // namespace docbot
