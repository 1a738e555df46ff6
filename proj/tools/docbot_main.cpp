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

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "docbot/chitchat.hpp"
#include "docbot/dialogue_manager.hpp"
#include "docbot/error.hpp"
#include "docbot/gradient_suite.hpp"
#include "docbot/matcher.hpp"
#include "docbot/recall.hpp"
#include "docbot/rng.hpp"
#include "docbot/service.hpp"
#include "docbot/strings.hpp"
#include "docbot/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace docbot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitModel = 3;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
    case ErrorKind::kConfig:
      return kExitUsage;
    case ErrorKind::kData:
    case ErrorKind::kValidation:
    case ErrorKind::kNotFound:
    case ErrorKind::kSession:
      return kExitData;
    case ErrorKind::kModel:
    case ErrorKind::kShape:
    case ErrorKind::kTraining:
      return kExitModel;
  }
  return kExitModel;
}

void require_file(const std::string &path, const std::string &flag) {
  if (!fs::is_regular_file(path)) throw DataError(flag + ": no such file: " + path);
}

void require_model(const std::string &path, const std::string &flag) {
  if (!fs::is_regular_file(path)) throw ModelError(flag + ": no such file: " + path);
}

std::string default_store_dir() {
  if (const char *v = std::getenv("DOCBOT_DATA_DIR"); v && *v) return v;
  return "docbot-data";
}

std::string documents_dir(const std::string &data_dir) {
  return (fs::path(data_dir) / "documents").string();
}

RawDocument read_document(const std::string &path, const std::string &title) {
  RawDocument doc;
  doc.text = read_file(path);
  doc.title = title.empty() ? fs::path(path).stem().string() : title;
  return doc;
}

void print_info(const DocumentInfo &d, const std::string &origin) {
  std::printf("%s  sentences=%zu  triples=%zu  %s\n", d.doc_id.c_str(), d.n_sentences, d.n_triples,
              origin.c_str());
}

struct MatcherFlags {
  size_t embed = 0, hidden = 0, max_tokens = 0, max_utterances = 0, match_dim = 0;
  size_t epochs = 0, batch = 0, patience = 0, min_freq = 0;
  double lr = 0;

  void add(CLI::App *cmd) {
    cmd->add_option("--embed", embed, "Embedding size");
    cmd->add_option("--hidden", hidden, "GRU hidden size");
    cmd->add_option("--max-tokens", max_tokens, "Tokens kept per utterance");
    cmd->add_option("--max-utterances", max_utterances, "Context utterances kept");
    cmd->add_option("--match-dim", match_dim, "Matching vector size");
    cmd->add_option("--epochs", epochs, "Maximum epochs");
    cmd->add_option("--batch", batch, "Contexts per minibatch");
    cmd->add_option("--patience", patience, "Early-stopping patience in epochs");
    cmd->add_option("--min-freq", min_freq, "Minimum token frequency for the vocabulary");
    cmd->add_option("--lr", lr, "Adam learning rate");
  }

  void apply(HyperParams &hp) const {
    if (embed) hp.embed_dim = embed;
    if (hidden) hp.hidden_dim = hidden;
    if (max_tokens) hp.max_tokens = max_tokens;
    if (max_utterances) hp.max_utterances = max_utterances;
    if (match_dim) hp.match_dim = match_dim;
    if (epochs) hp.epochs = epochs;
    if (batch) hp.batch_size = batch;
    if (patience) hp.patience = patience;
    if (min_freq) hp.min_token_freq = min_freq;
    if (lr > 0) hp.learning_rate = lr;
  }
};

std::string format_recall(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// ---- subcommands -------------------------------------------------------

int cmd_ingest(const std::string &path, const std::string &data_dir, const std::string &title) {
  if (!fs::exists(path)) throw DataError("ingest: no such file or directory: " + path);
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto &e : fs::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("ingest: no .txt files in " + path);
  } else {
    files.push_back(path);
  }
  DocumentStore store(default_resources(), documents_dir(data_dir));
  store.load();
  for (const fs::path &f : files) {
    print_info(store.add(read_document(f.string(), files.size() == 1 ? title : "")), f.string());
  }
  return kExitOk;
}

int cmd_index(const std::string &data_dir, bool rebuild) {
  DocumentStore store(default_resources(), documents_dir(data_dir));
  store.load();
  if (rebuild) store.rebuild_indexes();
  for (const DocumentInfo &d : store.list()) {
    const SentenceIndex &idx = store.index(d.doc_id);
    std::printf("%s  sentences=%zu  terms=%zu  avg_length=%.3f\n", d.doc_id.c_str(),
                idx.n_sentences(), idx.all_postings().size(), idx.avg_length());
  }
  std::printf("%zu document(s)%s\n", store.size(), rebuild ? ", indexes rebuilt" : "");
  return kExitOk;
}

struct TrainMatcherArgs {
  std::string data, val, out, doc, doc_questions;
  size_t doc_repeats = 20;
  bool no_self_match = false;
  uint64_t seed = 1;
  MatcherFlags flags;
};

int cmd_train_matcher(const TrainMatcherArgs &a) {
  require_file(a.data, "--data");
  if (!a.val.empty()) require_file(a.val, "--val");
  if (a.doc.empty() != a.doc_questions.empty()) {
    throw UsageError("--doc and --doc-questions go together");
  }
  if (!a.doc.empty()) {
    require_file(a.doc, "--doc");
    require_file(a.doc_questions, "--doc-questions");
  }
  HyperParams hp;
  a.flags.apply(hp);
  hp.seed = a.seed;
  hp.self_match_enabled = !a.no_self_match;
  hp.validate();

  std::vector<DialogueExample> train = load_dialogue_jsonl(a.data);
  if (!a.doc.empty()) {
    std::vector<Sentence> sentences =
        preprocess_document(read_document(a.doc, ""), default_resources());
    auto extra = document_examples(sentences, load_document_questions(a.doc_questions),
                                   a.doc_repeats, a.seed);
    train.insert(train.end(), extra.begin(), extra.end());
  }
  std::vector<ExampleGroup> valid;
  TrainOptions opts;
  if (!a.val.empty()) {
    valid = group_by_context(load_dialogue_jsonl(a.val));
    opts.valid = &valid;
  }
  opts.on_epoch = [](const EpochStats &s) {
    std::printf("epoch %zu  loss %.5f", s.epoch, s.train_loss);
    if (s.valid_recall) std::printf("  valid R@1 %.4f", *s.valid_recall);
    std::printf("  %.1fs\n", s.seconds);
    std::fflush(stdout);
    return true;
  };
  TrainResult r = train_matcher(train, hp, opts);
  r.model.save(a.out);
  std::printf("saved %s (best epoch %zu, vocabulary %zu)\n", a.out.c_str(), r.best_epoch,
              r.model.vocab().size());
  return kExitOk;
}

int cmd_train_chitchat(const std::string &pairs_path, const std::string &out, uint64_t seed,
                       size_t epochs, size_t hidden, double lr) {
  require_file(pairs_path, "--pairs");
  Seq2SeqHyper hp;
  hp.seed = seed;
  if (epochs) hp.epochs = epochs;
  if (hidden) hp.embed_dim = hp.hidden_dim = hidden;
  if (lr > 0) hp.learning_rate = lr;
  hp.validate();
  auto r = train_seq2seq(load_pairs_jsonl(pairs_path), hp, [](size_t epoch, double loss) {
    std::printf("epoch %zu  loss %.5f\n", epoch, loss);
    std::fflush(stdout);
    return true;
  });
  r.model.save(out);
  std::printf("saved %s (vocabulary %zu)\n", out.c_str(), r.model.vocab().size());
  return kExitOk;
}

struct EvalArgs {
  std::vector<std::string> models;
  std::string data, tfidf_train;
  size_t n = 10;
  std::string ks = "1,2,5";
  bool json_out = false;
  bool oracle = false;
  std::vector<uint64_t> random_seeds;
};

int cmd_eval(const EvalArgs &a) {
  require_file(a.data, "--data");
  for (const auto &m : a.models) require_model(m, "--model");
  if (!a.tfidf_train.empty()) require_file(a.tfidf_train, "--tfidf");
  if (a.models.empty() && a.tfidf_train.empty() && !a.oracle && a.random_seeds.empty()) {
    throw UsageError("eval: give at least one of --model, --tfidf, --oracle, --random");
  }
  const std::vector<int> ks = parse_int_list(a.ks);
  const std::vector<ExampleGroup> groups = group_fixed(load_dialogue_jsonl(a.data), a.n);

  std::vector<std::pair<std::string, EvalReport>> rows;
  for (const auto &path : a.models) {
    MatcherModel model = MatcherModel::load(path);
    rows.emplace_back(path, evaluate_matcher(model, groups, ks));
  }
  if (!a.tfidf_train.empty()) {
    TfidfScorer tf = TfidfScorer::fit(load_dialogue_jsonl(a.tfidf_train));
    rows.emplace_back("tfidf", evaluate_recall(
                                   groups, [&](const ExampleGroup &g) { return tf.score_group(g); },
                                   ks));
  }
  if (a.oracle) {
    rows.emplace_back("oracle", evaluate_recall(
                                    groups,
                                    [](const ExampleGroup &g) {
                                      return std::vector<double>(g.labels.begin(), g.labels.end());
                                    },
                                    ks));
  }
  for (uint64_t seed : a.random_seeds) {
    Rng rng(seed);
    rows.emplace_back("random:" + std::to_string(seed),
                      evaluate_recall(
                          groups,
                          [&](const ExampleGroup &g) {
                            std::vector<double> s(g.responses.size());
                            for (double &v : s) v = rng.uniform();
                            return s;
                          },
                          ks));
  }

  if (a.json_out) {
    json results = json::array();
    for (const auto &[name, report] : rows) {
      json j = report.to_json();
      j["scorer"] = name;
      results.push_back(j);
    }
    std::cout << json{{"n", a.n}, {"num_contexts", groups.size()}, {"results", results}}.dump(2)
              << "\n";
    return kExitOk;
  }
  size_t width = 6;
  for (const auto &row : rows) width = std::max(width, row.first.size());
  std::printf("%-*s  %8s", static_cast<int>(width), "scorer", "contexts");
  for (int k : ks) std::printf("  %8s", ("R" + std::to_string(a.n) + "@" + std::to_string(k)).c_str());
  std::printf("\n");
  for (const auto &[name, report] : rows) {
    std::printf("%-*s  %8zu", static_cast<int>(width), name.c_str(), report.num_contexts);
    for (int k : ks) std::printf("  %8s", format_recall(report.recalls.at(k)).c_str());
    std::printf("\n");
  }
  return kExitOk;
}

int cmd_gen_data(const std::string &out, size_t contexts, size_t eval_contexts, size_t candidates,
                 uint64_t seed) {
  SyntheticConfig cfg;
  cfg.train_contexts = contexts;
  cfg.eval_contexts = eval_contexts;
  cfg.candidates = candidates;
  cfg.seed = seed;
  SyntheticCorpus corpus = generate_corpus(cfg);
  write_corpus(corpus, out);
  std::printf("wrote %s: train %zu contexts, valid %zu, test %zu (n=%zu)\n", out.c_str(),
              contexts, eval_contexts, eval_contexts, candidates);
  return kExitOk;
}

struct ChatArgs {
  std::string doc, model, chitchat_model, canned;
  double threshold = 0.3;
  bool trace = false;
};

int cmd_chat(const ChatArgs &a) {
  require_file(a.doc, "--doc");
  if (!a.model.empty()) require_model(a.model, "--model");
  if (!a.chitchat_model.empty()) require_model(a.chitchat_model, "--chitchat-model");
  const std::string canned = a.canned.empty()
                                 ? (fs::path(default_resource_dir()) / "canned_responses.txt").string()
                                 : a.canned;
  DocumentStore docs(default_resources());
  const DocumentInfo info = docs.add(read_document(a.doc, ""));
  ManagerConfig cfg;
  cfg.score_threshold = a.threshold;
  std::shared_ptr<const CandidateScorer> scorer;
  if (!a.model.empty()) {
    auto model = std::make_shared<const MatcherModel>(MatcherModel::load(a.model));
    cfg.max_utterances = model->hyper().max_utterances;
    scorer = std::make_shared<MatcherScorer>(model);
  }
  auto chitchat = std::make_shared<ChitchatEngine>(load_canned_responses(canned), cfg.decode);
  if (!a.chitchat_model.empty()) {
    chitchat->set_model(std::make_shared<const Seq2SeqModel>(Seq2SeqModel::load(a.chitchat_model)));
  }
  DialogueManager dm(docs, cfg, scorer, chitchat);
  const std::string sid = dm.create_session({info.doc_id});
  std::fprintf(stderr, "loaded %s (%zu sentences)%s; empty line or EOF to quit\n",
               info.doc_id.c_str(), info.n_sentences, scorer ? "" : ", no matcher model");
  std::string line;
  while (std::getline(std::cin, line)) {
    if (trim(line).empty()) break;
    ResponseDecision d = dm.handle_message(sid, line);
    std::printf("%s\t[%s", d.reply.c_str(), std::string(origin_name(d.origin)).c_str());
    if (d.score) std::printf(" %.3f", *d.score);
    std::printf("]\n");
    if (a.trace) {
      const json j = d.to_json();
      for (const auto &t : j["trace"]) {
        std::printf("  %.3f  %-18s %s\n", t["score"].get<double>(),
                    t["kind"].get<std::string>().c_str(), t["text"].get<std::string>().c_str());
      }
    }
    std::fflush(stdout);
  }
  return kExitOk;
}

int cmd_serve(const std::string &config_path) {
  ServiceConfig cfg;
  if (!config_path.empty()) {
    cfg = ServiceConfig::load(config_path);
  }
  cfg.apply_env();
  cfg.validate();

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(cfg);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  std::fprintf(stderr, "docbot serving on http://%s:%d (data %s)\n", cfg.host.c_str(), cfg.port,
               cfg.data_dir.c_str());
  const bool ok = service.listen();
  if (!ok) {
    std::fprintf(stderr, "docbot: error: cannot listen on %s:%d\n", cfg.host.c_str(), cfg.port);
    pthread_kill(waiter.native_handle(), SIGTERM);
  }
  waiter.join();
  return ok ? kExitOk : kExitUsage;
}

int cmd_gradcheck(uint64_t seed) {
  bool all = true;
  for (const auto &r : full_gradient_suite(seed)) {
    std::printf("%-28s %s  max_rel_error %.3e  checked %zu\n", r.name.c_str(),
                r.passed ? "PASS" : "FAIL", r.max_rel_error, r.checked);
    if (!r.passed) {
      std::printf("  worst %s[%zu]\n", r.worst_param.c_str(), r.worst_index);
      all = false;
    }
  }
  return all ? kExitOk : kExitModel;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"docbot: document-grounded multi-turn chatbot engine"};
  app.require_subcommand(1);
  std::string data_dir = default_store_dir();

  auto *ingest = app.add_subcommand("ingest", "Preprocess and index documents");
  std::string ingest_path, ingest_title;
  ingest->add_option("path", ingest_path, "Text file or directory of .txt files")->required();
  ingest->add_option("--data-dir", data_dir, "Service data directory");
  ingest->add_option("--title", ingest_title, "Title for a single document");

  auto *index = app.add_subcommand("index", "Show or rebuild the stored indexes");
  bool rebuild = false;
  index->add_flag("--rebuild", rebuild, "Rebuild every index file");
  index->add_option("--data-dir", data_dir, "Service data directory");

  auto *tm = app.add_subcommand("train-matcher", "Train the response matcher");
  TrainMatcherArgs tma;
  tm->add_option("--data", tma.data, "Training JSONL")->required();
  tm->add_option("--val", tma.val, "Validation JSONL (grouped candidates)");
  tm->add_option("--out", tma.out, "Output model file")->required();
  tm->add_flag("--no-self-match", tma.no_self_match, "Disable the self-matching block");
  tm->add_option("--seed", tma.seed, "Random seed");
  tm->add_option("--doc", tma.doc, "Product document for grounded examples");
  tm->add_option("--doc-questions", tma.doc_questions, "Question-to-sentence JSONL for --doc");
  tm->add_option("--doc-repeats", tma.doc_repeats, "Contexts per document question");
  tma.flags.add(tm);

  auto *tc = app.add_subcommand("train-chitchat", "Train the chit-chat generator");
  std::string pairs, chat_out;
  uint64_t chat_seed = 1;
  size_t chat_epochs = 0, chat_hidden = 0;
  double chat_lr = 0;
  tc->add_option("--pairs", pairs, "Query/reply JSONL")->required();
  tc->add_option("--out", chat_out, "Output model file")->required();
  tc->add_option("--seed", chat_seed, "Random seed");
  tc->add_option("--epochs", chat_epochs, "Epochs");
  tc->add_option("--hidden", chat_hidden, "Embedding and hidden size");
  tc->add_option("--lr", chat_lr, "Adam learning rate");

  auto *ev = app.add_subcommand("eval", "Recall at k over grouped candidates");
  EvalArgs eva;
  ev->add_option("--model", eva.models, "Matcher model file (repeatable)");
  ev->add_option("--data", eva.data, "Evaluation JSONL")->required();
  ev->add_option("--n", eva.n, "Candidates per context");
  ev->add_option("--k", eva.ks, "Comma-separated cutoffs");
  ev->add_option("--tfidf", eva.tfidf_train, "Add the TF-IDF baseline fit on this JSONL");
  ev->add_flag("--oracle", eva.oracle, "Add a scorer that reads the labels");
  ev->add_option("--random", eva.random_seeds, "Add a uniform random scorer with this seed");
  ev->add_flag("--json", eva.json_out, "Print JSON instead of a table");

  auto *gd = app.add_subcommand("gen-data", "Write a synthetic multi-turn corpus");
  std::string gen_out;
  size_t contexts = 5000, eval_contexts = 500, candidates = 10;
  uint64_t gen_seed = 7;
  gd->add_option("--out", gen_out, "Output directory")->required();
  gd->add_option("--contexts", contexts, "Training contexts");
  gd->add_option("--eval-contexts", eval_contexts, "Contexts in each of valid and test");
  gd->add_option("--candidates", candidates, "Candidates per evaluation context");
  gd->add_option("--seed", gen_seed, "Random seed");

  auto *ch = app.add_subcommand("chat", "Chat about a document in the terminal");
  ChatArgs cha;
  ch->add_option("--doc", cha.doc, "Product document")->required();
  ch->add_option("--model", cha.model, "Matcher model file");
  ch->add_option("--chitchat-model", cha.chitchat_model, "Chit-chat model file");
  ch->add_option("--canned", cha.canned, "Canned responses file");
  ch->add_option("--threshold", cha.threshold, "Minimum matching score");
  ch->add_flag("--trace", cha.trace, "Print the scored candidates");

  auto *sv = app.add_subcommand("serve", "Run the HTTP service");
  std::string config_path;
  sv->add_option("--config", config_path, "key = value config file");

  auto *gc = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  uint64_t gc_seed = 7;
  gc->add_option("--seed", gc_seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::fprintf(stderr, "docbot: error: %s\n", e.what());
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_path, data_dir, ingest_title);
    if (*index) return cmd_index(data_dir, rebuild);
    if (*tm) return cmd_train_matcher(tma);
    if (*tc) return cmd_train_chitchat(pairs, chat_out, chat_seed, chat_epochs, chat_hidden, chat_lr);
    if (*ev) return cmd_eval(eva);
    if (*gd) return cmd_gen_data(gen_out, contexts, eval_contexts, candidates, gen_seed);
    if (*ch) return cmd_chat(cha);
    if (*sv) return cmd_serve(config_path);
    if (*gc) return cmd_gradcheck(gc_seed);
  } catch (const Error &e) {
    std::fprintf(stderr, "docbot: error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception &e) {
    std::fprintf(stderr, "docbot: error: %s\n", e.what());
    return kExitModel;
  }
  return kExitUsage;
}
