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

#include "docbot/synthetic.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "docbot/candidate_gen.hpp"
#include "docbot/error.hpp"
#include "docbot/rng.hpp"
#include "docbot/strings.hpp"

namespace docbot {
namespace {

struct Attribute {
  const char *key;
  std::vector<std::string> questions;   // direct; "{p}" is the product or "it"
  std::vector<std::string> elliptical;  // follow-ups without a verb
  std::vector<std::string> answers;     // "{p}" product, "{v}" value
  std::vector<std::string> values;
};

const std::vector<Attribute> &attributes() {
  static const std::vector<Attribute> kAttrs = {
      {"battery",
       {"how long does the battery of {p} last", "what is the battery life of {p}"},
       {"what about the battery", "and the battery life ?"},
       {"the {p} runs for {v} hours on one charge", "you get about {v} hours of use from the {p}"},
       {"8", "10", "12", "14", "16", "18"}},
      {"price",
       {"how much does {p} cost", "what is the price of {p}"},
       {"and the price ?", "what about the cost"},
       {"the {p} sells for {v} dollars", "you can buy the {p} for {v} dollars"},
       {"499", "699", "799", "999", "1299", "1499"}},
      {"weight",
       {"how heavy is {p}", "what does {p} weigh"},
       {"and the weight ?", "what about its weight"},
       {"the {p} weighs only {v} kilograms", "at {v} kilograms the {p} is easy to carry"},
       {"1.1", "1.2", "1.4", "1.6", "1.8", "2.1"}},
      {"screen",
       {"how big is the screen of {p}", "what display does {p} have"},
       {"what about the display", "and the screen ?"},
       {"the {p} has a {v} inch touch panel with sharp colors",
        "a {v} inch panel sits on the {p}"},
       {"12", "13", "14", "15", "16", "17"}},
      {"storage",
       {"how much storage does {p} have", "how much space is there for files on {p}"},
       {"and the storage ?", "what about disk space"},
       {"the {p} ships with a {v} gigabyte drive", "a {v} gigabyte drive is built into the {p}"},
       {"128", "256", "512", "1024"}},
      {"memory",
       {"how much memory does {p} have", "how much ram is in {p}"},
       {"and the memory ?", "what about ram"},
       {"the {p} comes with {v} gigabytes of working memory",
        "{v} gigabytes of working memory power the {p}"},
       {"4", "8", "16", "32"}},
      {"warranty",
       {"is there a warranty for {p}", "how long is the warranty of {p}"},
       {"and the warranty ?", "what about a guarantee"},
       {"every {p} is covered for {v} years of repair service",
        "repairs on the {p} are free for {v} years"},
       {"1", "2", "3"}},
      {"color",
       {"what colors are available for {p}", "which colors can i choose for {p}"},
       {"and the colors ?", "what about other colors"},
       {"the {p} comes in {v} and silver finishes", "you can order the {p} in {v} or silver"},
       {"black", "blue", "red", "gold", "green"}},
      {"charging",
       {"does {p} support fast charging", "how quickly does {p} charge"},
       {"and charging ?", "what about charging speed"},
       {"the charger refills half the power of the {p} in {v} minutes",
        "plug in the {p} for {v} minutes to reach half power"},
       {"20", "30", "40", "45"}},
      {"delivery",
       {"when will {p} arrive", "how fast is delivery for {p}"},
       {"and delivery ?", "what about shipping"},
       {"orders for the {p} are delivered within {v} days",
        "the {p} reaches your door in {v} days"},
       {"2", "3", "5", "7"}},
      {"ports",
       {"what ports does {p} have", "which connectors does {p} offer"},
       {"and the ports ?", "what about connectors"},
       {"the {p} offers {v} usb sockets and an hdmi output",
        "{v} usb sockets line the sides of the {p}"},
       {"2", "3", "4"}},
      {"camera",
       {"does {p} have a webcam", "how good is the camera on {p}"},
       {"and the camera ?", "what about the webcam"},
       {"the {p} records video at {v} pixels for calls",
        "calls on the {p} stream at {v} pixels"},
       {"720", "1080"}},
  };
  return kAttrs;
}

const std::vector<std::string> &products() {
  static const std::vector<std::string> kProducts = {
      "aurora x1", "nimbus pro", "vertex air", "zephyr 14", "orion book", "lumen s3",
      "pulse mini", "falcon go", "atlas one", "nova lite", "echo slate", "terra max"};
  return kProducts;
}

const std::vector<std::string> kOpeners = {
    "hi , i am looking at the {p}", "do you sell the {p} ?", "tell me about the {p}",
    "hello , is the {p} in stock ?", "i want to buy the {p}", "can you help me with the {p} ?"};
const std::vector<std::string> kAcks = {
    "sure , the {p} is a great choice", "yes , we have the {p} in stock",
    "of course , happy to help with the {p}", "the {p} is one of our best sellers"};
const std::vector<std::string> kComparisons = {
    "i also looked at the {p}", "my friend owns the {p}", "is it better than the {p} ?"};
const std::vector<std::string> kComparisonReplies = {
    "both are popular models", "many customers compare them", "each has its strengths"};
const std::vector<std::string> kSwitches = {
    "and the {p} ?", "what about the {p}", "how about the {p} ?", "same question for the {p}"};
const std::vector<std::string> kUnrelated = {
    "thanks for shopping with us today", "our store opens at nine every morning",
    "you can track every order from your account page", "gift cards never expire",
    "returns are accepted at any of our stores", "sign up for our newsletter to get coupons"};

std::string fill(std::string tpl, const std::string &p, const std::string &v = "") {
  auto replace = [&](const std::string &key, const std::string &with) {
    for (size_t pos; (pos = tpl.find(key)) != std::string::npos;) tpl.replace(pos, key.size(), with);
  };
  replace("{p}", p);
  replace("{v}", v);
  return tpl;
}

class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {
    // Each product gets a fixed value per attribute.
    for (size_t p = 0; p < products().size(); ++p) {
      std::vector<size_t> row;
      for (const auto &a : attributes()) row.push_back(rng_.below(a.values.size()));
      values_.push_back(row);
    }
  }

  std::string answer(size_t product, size_t attr) {
    const Attribute &a = attributes()[attr];
    return fill(rng_.pick(a.answers), products()[product], a.values[values_[product][attr]]);
  }

  struct Context {
    std::vector<std::string> turns;
    size_t product = 0;
    size_t attr = 0;
    size_t earlier_attr = SIZE_MAX;  // another attribute answered earlier
    size_t previous_product = SIZE_MAX;  // set when the user switched products
  };

  Context context() {
    const size_t np = products().size(), na = attributes().size();
    Context c;
    c.product = rng_.below(np);
    c.attr = rng_.below(na);
    const std::string &p = products()[c.product];
    c.turns.push_back(fill(rng_.pick(kOpeners), p));
    c.turns.push_back(fill(rng_.pick(kAcks), p));
    if (rng_.chance(0.3)) {
      size_t other = (c.product + 1 + rng_.below(np - 1)) % np;
      c.turns.push_back(fill(rng_.pick(kComparisons), products()[other]));
      c.turns.push_back(rng_.pick(kComparisonReplies));
    }
    if (!rng_.chance(0.6)) {
      c.turns.push_back(fill(rng_.pick(attributes()[c.attr].questions), rng_.chance(0.3) ? "the " + p : "it"));
      return c;
    }
    const size_t earlier = (c.attr + 1 + rng_.below(na - 1)) % na;
    c.turns.push_back(fill(rng_.pick(attributes()[earlier].questions), "it"));
    c.turns.push_back(answer(c.product, earlier));
    if (rng_.chance(0.35)) {
      // Same attribute, different product: "and the nimbus pro ?"
      c.previous_product = c.product;
      c.product = (c.product + 1 + rng_.below(np - 1)) % np;
      c.attr = earlier;
      c.turns.push_back(fill(rng_.pick(kSwitches), products()[c.product]));
      return c;
    }
    c.earlier_attr = earlier;
    const Attribute &a = attributes()[c.attr];
    if (rng_.chance(0.6)) {
      c.turns.push_back(rng_.pick(a.elliptical));
    } else {
      c.turns.push_back(fill(rng_.pick(a.questions), rng_.chance(0.3) ? "the " + p : "it"));
    }
    return c;
  }

  // A wrong answer: the same product with another attribute (preferring
  // one discussed earlier), the previous product when the user switched,
  // another product with the same attribute, or something unrelated.
  std::string negative(const Context &c) {
    const size_t np = products().size(), na = attributes().size();
    if (c.previous_product != SIZE_MAX && rng_.chance(0.3)) {
      return answer(c.previous_product, c.attr);
    }
    const double u = rng_.uniform();
    if (u < 0.45) {
      size_t other = (c.earlier_attr != SIZE_MAX && rng_.chance(0.4))
                         ? c.earlier_attr
                         : (c.attr + 1 + rng_.below(na - 1)) % na;
      return answer(c.product, other);
    }
    if (u < 0.85) return answer((c.product + 1 + rng_.below(np - 1)) % np, c.attr);
    if (rng_.chance(0.5)) return rng_.pick(kUnrelated);
    return answer(rng_.below(np), rng_.below(na));
  }

  void train_context(std::vector<DialogueExample> &out) {
    Context c = context();
    const auto &ctx = c.turns;
    std::string pos = answer(c.product, c.attr);
    std::string neg;
    do {
      neg = negative(c);
    } while (is_correct(neg, c.product, c.attr));
    if (rng_.chance(0.5)) {
      out.push_back({ctx, pos, 1});
      out.push_back({ctx, neg, 0});
    } else {
      out.push_back({ctx, neg, 0});
      out.push_back({ctx, pos, 1});
    }
  }

  void eval_context(std::vector<DialogueExample> &out, size_t n) {
    Context c = context();
    const auto &ctx = c.turns;
    std::vector<std::string> cands{answer(c.product, c.attr)};
    size_t guard = 0;
    while (cands.size() < n) {
      std::string neg = negative(c);
      if (is_correct(neg, c.product, c.attr)) continue;
      if (std::find(cands.begin(), cands.end(), neg) != cands.end() && ++guard < 1000) continue;
      cands.push_back(neg);
    }
    const size_t slot = rng_.below(n);
    std::swap(cands[0], cands[slot]);
    for (size_t i = 0; i < n; ++i) out.push_back({ctx, cands[i], i == slot ? 1 : 0});
  }

 private:
  // True when `text` is some phrasing of the right answer.
  bool is_correct(const std::string &text, size_t product, size_t attr) const {
    const Attribute &a = attributes()[attr];
    for (const auto &tpl : a.answers) {
      if (text == fill(tpl, products()[product], a.values[values_[product][attr]])) return true;
    }
    return false;
  }

  Rng rng_;
  std::vector<std::vector<size_t>> values_;
};

}  // namespace

SyntheticCorpus generate_corpus(const SyntheticConfig &cfg) {
  if (cfg.candidates < 2) throw UsageError("need at least 2 candidates per context");
  Generator gen(cfg.seed);
  SyntheticCorpus corpus;
  for (size_t i = 0; i < cfg.train_contexts; ++i) gen.train_context(corpus.train);
  for (size_t i = 0; i < cfg.eval_contexts; ++i) gen.eval_context(corpus.valid, cfg.candidates);
  for (size_t i = 0; i < cfg.eval_contexts; ++i) gen.eval_context(corpus.test, cfg.candidates);
  return corpus;
}

void write_corpus(const SyntheticCorpus &corpus, const std::string &dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir + ": " + ec.message());
  write_file(dir + "/train.jsonl", to_dialogue_jsonl(corpus.train));
  write_file(dir + "/valid.jsonl", to_dialogue_jsonl(corpus.valid));
  write_file(dir + "/test.jsonl", to_dialogue_jsonl(corpus.test));
}

std::vector<DocumentQuestion> parse_document_questions(std::string_view jsonl) {
  std::vector<DocumentQuestion> out;
  size_t lineno = 0;
  for (const std::string &raw : split(jsonl, '\n')) {
    ++lineno;
    if (trim(raw).empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    nlohmann::json j = nlohmann::json::parse(raw, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + "not a JSON object");
    if (!j.contains("question") || !j["question"].is_string()) {
      throw DataError(where + "'question' must be a string");
    }
    if (!j.contains("sentence") || !j["sentence"].is_number_unsigned()) {
      throw DataError(where + "'sentence' must be a non-negative integer");
    }
    out.push_back({j["question"].get<std::string>(), j["sentence"].get<size_t>()});
  }
  return out;
}

std::vector<DocumentQuestion> load_document_questions(const std::string &path) {
  try {
    return parse_document_questions(read_file(path));
  } catch (const DataError &e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<DialogueExample> document_examples(const std::vector<Sentence> &sentences,
                                               const std::vector<DocumentQuestion> &questions,
                                               size_t repeats, uint64_t seed) {
  if (sentences.size() < 2) throw DataError("document needs at least 2 sentences");
  std::vector<std::vector<std::string>> texts;
  for (const Sentence &s : sentences) {
    std::vector<std::string> t{s.text};
    for (const SvoTriple &tr : extract_triples(s)) {
      std::string simple = triple_to_sentence(tr);
      if (std::find(t.begin(), t.end(), simple) == t.end()) t.push_back(std::move(simple));
    }
    texts.push_back(std::move(t));
  }
  for (const DocumentQuestion &q : questions) {
    if (q.sentence >= sentences.size()) {
      throw DataError("question '" + q.question + "' points at sentence " +
                      std::to_string(q.sentence) + " of " + std::to_string(sentences.size()));
    }
  }
  static const std::vector<std::pair<std::string, std::string>> kGreetings = {
      {"hi", "hello ! how can i help you ?"},
      {"good morning", "good morning , what would you like to know ?"},
      {"hello there", "hi ! ask me anything about the product"}};
  Rng rng(seed);
  std::vector<DialogueExample> out;
  for (size_t r = 0; r < repeats; ++r) {
    for (size_t qi = 0; qi < questions.size(); ++qi) {
      const DocumentQuestion &q = questions[qi];
      std::vector<std::string> ctx;
      const double u = rng.uniform();
      if (u < 0.35) {
        const auto &g = rng.pick(kGreetings);
        ctx = {g.first, g.second};
      } else if (u < 0.7 && questions.size() > 1) {
        const DocumentQuestion &prev = questions[(qi + 1 + rng.below(questions.size() - 1)) %
                                                 questions.size()];
        ctx = {prev.question, rng.pick(texts[prev.sentence])};
      }
      ctx.push_back(q.question);
      size_t other = rng.below(sentences.size() - 1);
      if (other >= q.sentence) ++other;
      DialogueExample pos{ctx, rng.pick(texts[q.sentence]), 1};
      DialogueExample neg{ctx, rng.pick(texts[other]), 0};
      if (rng.chance(0.5)) std::swap(pos, neg);
      out.push_back(std::move(pos));
      out.push_back(std::move(neg));
    }
  }
  return out;
}

}  // namespace docbot
