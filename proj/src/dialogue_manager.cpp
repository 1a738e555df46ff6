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

#include "docbot/dialogue_manager.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>

#include "docbot/error.hpp"
#include "docbot/strings.hpp"

namespace docbot {

namespace fs = std::filesystem;
using nlohmann::json;

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

json DocumentInfo::to_json() const {
  json j = {{"doc_id", doc_id}, {"n_sentences", n_sentences}, {"n_triples", n_triples}};
  if (title) j["title"] = *title;
  return j;
}

namespace {

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool valid_doc_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

}  // namespace

DocumentStore::DocumentStore(const TextResources &resources, std::string dir)
    : resources_(resources), dir_(std::move(dir)) {
  if (!dir_.empty()) fs::create_directories(dir_);
}

std::shared_ptr<DocumentStore::Entry> DocumentStore::prepare(RawDocument doc) const {
  if (trim(doc.text).empty()) throw ValidationError("document text is empty");
  if (doc.doc_id.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "doc-%012llx",
                  static_cast<unsigned long long>(fnv1a(doc.text) & 0xffffffffffffULL));
    doc.doc_id = buf;
  }
  if (!valid_doc_id(doc.doc_id)) throw ValidationError("invalid doc_id: " + doc.doc_id);
  auto e = std::make_shared<Entry>();
  e->sentences = preprocess_document(doc, resources_);
  if (e->sentences.empty()) throw ValidationError("document has no sentences");
  e->index = SentenceIndex::build(e->sentences);
  for (const Sentence &s : e->sentences) e->info.n_triples += extract_triples(s).size();
  e->info.doc_id = doc.doc_id;
  e->info.title = doc.title;
  e->info.n_sentences = e->sentences.size();
  e->doc = std::move(doc);
  return e;
}

void DocumentStore::persist(const Entry &e) const {
  if (dir_.empty()) return;
  json j = {{"doc_id", e.doc.doc_id}, {"text", e.doc.text}};
  if (e.doc.title) j["title"] = *e.doc.title;
  const fs::path base = fs::path(dir_) / e.doc.doc_id;
  // Index first so a crash never leaves a document without one.
  e.index.save(base.string() + ".idx");
  write_file(base.string() + ".json", j.dump(2) + "\n");
}

DocumentInfo DocumentStore::add(RawDocument doc) {
  auto entry = prepare(std::move(doc));
  std::unique_lock lock(mu_);
  if (auto it = docs_.find(entry->info.doc_id); it != docs_.end()) {
    if (it->second->doc.text == entry->doc.text) return it->second->info;
    throw ValidationError("doc_id already exists: " + entry->info.doc_id);
  }
  persist(*entry);
  docs_[entry->info.doc_id] = entry;
  return entry->info;
}

size_t DocumentStore::load() {
  if (dir_.empty()) return 0;
  std::vector<fs::path> files;
  for (const auto &de : fs::directory_iterator(dir_)) {
    if (de.path().extension() == ".json") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  size_t loaded = 0;
  for (const fs::path &p : files) {
    RawDocument doc;
    try {
      json j = json::parse(read_file(p.string()));
      doc.doc_id = j.at("doc_id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      if (j.contains("title")) doc.title = j["title"].get<std::string>();
    } catch (const json::exception &e) {
      throw DataError(p.string() + ": " + e.what());
    }
    auto entry = prepare(std::move(doc));
    const std::string idx = (fs::path(dir_) / (entry->info.doc_id + ".idx")).string();
    bool fresh = false;
    try {
      SentenceIndex stored = SentenceIndex::load(idx);
      if (stored.n_sentences() == entry->sentences.size()) {
        entry->index = std::move(stored);
        fresh = true;
      }
    } catch (const DataError &) {
    }
    if (!fresh) entry->index.save(idx);
    std::unique_lock lock(mu_);
    docs_[entry->info.doc_id] = entry;
    ++loaded;
  }
  return loaded;
}

size_t DocumentStore::rebuild_indexes() {
  std::unique_lock lock(mu_);
  for (auto &[id, e] : docs_) {
    auto copy = std::make_shared<Entry>(*e);
    copy->index = SentenceIndex::build(copy->sentences);
    persist(*copy);
    e = copy;
  }
  return docs_.size();
}

std::shared_ptr<const DocumentStore::Entry> DocumentStore::find(const std::string &doc_id) const {
  std::shared_lock lock(mu_);
  auto it = docs_.find(doc_id);
  if (it == docs_.end()) throw NotFoundError("unknown document: " + doc_id);
  return it->second;
}

bool DocumentStore::contains(const std::string &doc_id) const {
  std::shared_lock lock(mu_);
  return docs_.count(doc_id) > 0;
}

size_t DocumentStore::size() const {
  std::shared_lock lock(mu_);
  return docs_.size();
}

std::vector<DocumentInfo> DocumentStore::list() const {
  std::shared_lock lock(mu_);
  std::vector<DocumentInfo> out;
  for (const auto &[id, e] : docs_) out.push_back(e->info);
  return out;
}

const SentenceIndex &DocumentStore::index(const std::string &doc_id) const {
  return find(doc_id)->index;
}

const std::vector<Sentence> &DocumentStore::sentences(const std::string &doc_id) const {
  return find(doc_id)->sentences;
}

std::vector<Sentence> DocumentStore::retrieve(const std::vector<std::string> &doc_ids,
                                              std::string_view message,
                                              const RetrievalConfig &config) const {
  const std::vector<std::string> terms = content_terms(message);
  struct Hit {
    double score;
    std::shared_ptr<const Entry> entry;
    size_t index;
  };
  std::vector<Hit> hits;
  std::vector<std::string> ids = doc_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (const std::string &id : ids) {
    auto e = find(id);
    for (const ScoredSentence &s : retrieve_top_k(e->index, terms, config)) {
      hits.push_back({s.score, e, s.ref.index});
    }
  }
  std::stable_sort(hits.begin(), hits.end(), [](const Hit &a, const Hit &b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.entry->info.doc_id != b.entry->info.doc_id) {
      return a.entry->info.doc_id < b.entry->info.doc_id;
    }
    return a.index < b.index;
  });
  if (hits.size() > static_cast<size_t>(config.k)) hits.resize(config.k);
  std::vector<Sentence> out;
  for (const Hit &h : hits) out.push_back(h.entry->sentences[h.index]);
  return out;
}

std::string_view role_name(Role role) { return role == Role::kUser ? "user" : "bot"; }

SessionStore::SessionStore(Clock clock) : clock_(std::move(clock)) {}

std::shared_ptr<Session> SessionStore::create(std::vector<std::string> doc_ids) {
  auto s = std::make_shared<Session>();
  s->doc_ids = std::move(doc_ids);
  s->created_ms = s->last_active_ms = clock_();
  std::lock_guard lock(mu_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "s-%08llu", static_cast<unsigned long long>(next_id_++));
  s->id = buf;
  sessions_[s->id] = s;
  return s;
}

std::shared_ptr<Session> SessionStore::get(const std::string &id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionError("unknown session: " + id);
  return it->second;
}

size_t SessionStore::expire(int64_t ttl_ms) {
  const int64_t now = clock_();
  std::lock_guard lock(mu_);
  size_t dropped = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    int64_t last;
    {
      std::lock_guard session_lock(it->second->mu);
      last = it->second->last_active_ms;
    }
    if (last + ttl_ms <= now) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

size_t SessionStore::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

MatcherScorer::MatcherScorer(std::shared_ptr<const MatcherModel> model)
    : model_(std::move(model)) {
  if (!model_) throw UsageError("MatcherScorer: null model");
}

std::vector<double> MatcherScorer::score(const std::vector<std::string> &context,
                                         const std::vector<std::string> &candidates) const {
  bool known = false;
  for (const std::string &u : context) {
    for (int id : encode_text(model_->vocab(), u)) known = known || id != Vocabulary::kUnk;
  }
  if (!known) return std::vector<double>(candidates.size(), 0.0);
  return model_->score_candidates(context, candidates);
}

void ManagerConfig::validate() const {
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw ConfigError("score_threshold must be in [0, 1]");
  }
  if (max_utterances == 0) throw ConfigError("max_utterances must be positive");
  retrieval.validate();
  decode.validate();
}

std::string_view origin_name(Origin origin) {
  return origin == Origin::kMatched ? "matched" : "chitchat";
}

json ResponseDecision::to_json() const {
  std::vector<const TraceEntry *> sorted;
  for (const TraceEntry &t : trace) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TraceEntry *a, const TraceEntry *b) { return a->score > b->score; });
  json tr = json::array();
  for (const TraceEntry *t : sorted) {
    tr.push_back({{"text", t->text},
                  {"kind", candidate_kind_name(t->kind)},
                  {"score", t->score},
                  {"doc_id", t->source.doc_id},
                  {"sentence_index", t->source.index}});
  }
  json j = {{"reply", reply}, {"origin", origin_name(origin)}, {"trace", std::move(tr)}};
  if (score) j["score"] = *score;
  return j;
}

DialogueManager::DialogueManager(const DocumentStore &docs, ManagerConfig config,
                                 std::shared_ptr<const CandidateScorer> scorer,
                                 std::shared_ptr<ChitchatEngine> chitchat, Clock clock)
    : docs_(docs),
      config_(std::move(config)),
      scorer_(std::move(scorer)),
      chitchat_(std::move(chitchat)),
      sessions_(std::move(clock)) {
  config_.validate();
  if (!chitchat_) throw UsageError("DialogueManager: null chit-chat engine");
}

std::string DialogueManager::create_session(std::vector<std::string> doc_ids) {
  for (const std::string &id : doc_ids) {
    if (!docs_.contains(id)) throw ValidationError("unknown document: " + id);
  }
  return sessions_.create(std::move(doc_ids))->id;
}

std::vector<Utterance> DialogueManager::history(const std::string &session_id) const {
  auto s = sessions_.get(session_id);
  std::lock_guard lock(s->mu);
  return {s->history.begin(), s->history.end()};
}

std::vector<std::string> DialogueManager::session_documents(const std::string &session_id) const {
  auto s = sessions_.get(session_id);
  std::lock_guard lock(s->mu);
  return s->doc_ids;
}

ResponseDecision DialogueManager::handle_message(const std::string &session_id,
                                                 std::string_view text) {
  auto session = sessions_.get(session_id);
  if (trim(text).empty()) throw ValidationError("message text is empty");
  std::lock_guard lock(session->mu);
  const size_t window = 2 * config_.max_utterances;
  auto append = [&](Role role, std::string t) {
    session->history.push_back({role, std::move(t), sessions_.now()});
    while (session->history.size() > window) session->history.pop_front();
    session->last_active_ms = session->history.back().timestamp_ms;
  };
  append(Role::kUser, std::string(trim(text)));
  const std::string &message = session->history.back().text;

  ResponseDecision d;
  if (scorer_ && !session->doc_ids.empty()) {
    std::vector<Sentence> retrieved = docs_.retrieve(session->doc_ids, message, config_.retrieval);
    CandidateSet set = generate_candidates(retrieved);
    if (!set.empty()) {
      std::vector<std::string> context;
      for (const Utterance &u : session->history) {
        if (u.role == Role::kUser || config_.include_bot_turns) context.push_back(u.text);
      }
      if (context.size() > config_.max_utterances) {
        context.erase(context.begin(), context.end() - static_cast<ptrdiff_t>(config_.max_utterances));
      }
      std::vector<std::string> texts;
      for (const Candidate &c : set.candidates) texts.push_back(c.text);
      std::vector<double> scores = scorer_->score(context, texts);
      if (scores.size() != texts.size()) throw ModelError("scorer returned wrong number of scores");
      size_t best = 0;
      for (size_t i = 0; i < set.size(); ++i) {
        d.trace.push_back({set.candidates[i].text, set.candidates[i].kind,
                           set.candidates[i].source, scores[i]});
        if (scores[i] > scores[best]) best = i;
      }
      d.score = scores[best];
      if (scores[best] >= config_.score_threshold) {
        d.origin = Origin::kMatched;
        d.reply = set.candidates[best].text;
      }
    }
  }
  if (d.origin == Origin::kChitchat) d.reply = chitchat_->reply(message);
  append(Role::kBot, d.reply);
  return d;
}

}  // namespace docbot
