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
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "docbot/candidate_gen.hpp"
#include "docbot/chitchat.hpp"
#include "docbot/matcher.hpp"
#include "docbot/retrieval.hpp"
#include "docbot/text_prep.hpp"

namespace docbot {

// Milliseconds since an arbitrary epoch.
using Clock = std::function<int64_t()>;
Clock system_clock();

struct DocumentInfo {
  std::string doc_id;
  std::optional<std::string> title;
  size_t n_sentences = 0;
  size_t n_triples = 0;

  nlohmann::json to_json() const;
};

// Preprocessed documents with one BM25 index each. When constructed with a
// directory, documents are written there as <id>.json plus <id>.idx.
class DocumentStore {
 public:
  explicit DocumentStore(const TextResources &resources, std::string dir = {});

  // Assigns "doc-<hash>" when doc_id is empty. Re-adding identical content
  // under the same id is a no-op. Throws ValidationError on blank text or
  // an id clash with different content.
  DocumentInfo add(RawDocument doc);

  // Loads every persisted document; a missing or stale .idx is rebuilt.
  // Returns the number of documents loaded.
  size_t load();
  // Rebuilds and rewrites every index file.
  size_t rebuild_indexes();

  bool contains(const std::string &doc_id) const;
  size_t size() const;
  std::vector<DocumentInfo> list() const;
  const std::string &dir() const { return dir_; }

  // Top-k sentences over the union of `doc_ids`, same ordering contract as
  // retrieve_top_k.
  std::vector<Sentence> retrieve(const std::vector<std::string> &doc_ids,
                                 std::string_view message,
                                 const RetrievalConfig &config) const;

  // Throws NotFoundError.
  const SentenceIndex &index(const std::string &doc_id) const;
  const std::vector<Sentence> &sentences(const std::string &doc_id) const;

 private:
  struct Entry {
    RawDocument doc;
    std::vector<Sentence> sentences;
    SentenceIndex index;
    DocumentInfo info;
  };

  std::shared_ptr<const Entry> find(const std::string &doc_id) const;
  std::shared_ptr<Entry> prepare(RawDocument doc) const;
  void persist(const Entry &entry) const;

  const TextResources &resources_;
  std::string dir_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<const Entry>> docs_;
};

enum class Role { kUser, kBot };
std::string_view role_name(Role role);

struct Utterance {
  Role role = Role::kUser;
  std::string text;
  int64_t timestamp_ms = 0;
};

struct Session {
  std::string id;
  std::vector<std::string> doc_ids;
  std::deque<Utterance> history;
  int64_t created_ms = 0;
  int64_t last_active_ms = 0;
  std::mutex mu;  // held for the whole of a turn
};

class SessionStore {
 public:
  explicit SessionStore(Clock clock = system_clock());

  std::shared_ptr<Session> create(std::vector<std::string> doc_ids);
  // Throws SessionError for unknown or expired ids.
  std::shared_ptr<Session> get(const std::string &id) const;
  // Drops sessions with last_active + ttl <= now. Returns how many.
  size_t expire(int64_t ttl_ms);
  size_t size() const;
  int64_t now() const { return clock_(); }

 private:
  Clock clock_;
  mutable std::mutex mu_;
  uint64_t next_id_ = 1;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
};

class CandidateScorer {
 public:
  virtual ~CandidateScorer() = default;
  // One score in [0, 1] per candidate. `context` is chronological.
  virtual std::vector<double> score(const std::vector<std::string> &context,
                                    const std::vector<std::string> &candidates) const = 0;
};

// Scores with a trained matcher. A context without any in-vocabulary token
// scores every candidate 0.
class MatcherScorer : public CandidateScorer {
 public:
  explicit MatcherScorer(std::shared_ptr<const MatcherModel> model);
  std::vector<double> score(const std::vector<std::string> &context,
                            const std::vector<std::string> &candidates) const override;
  const MatcherModel &model() const { return *model_; }

 private:
  std::shared_ptr<const MatcherModel> model_;
};

struct ManagerConfig {
  double score_threshold = 0.3;
  RetrievalConfig retrieval;
  DecodeConfig decode;
  bool include_bot_turns = true;
  size_t max_utterances = 10;  // matcher context; history keeps twice this

  void validate() const;
};

enum class Origin { kMatched, kChitchat };
std::string_view origin_name(Origin origin);

struct TraceEntry {
  std::string text;
  CandidateKind kind = CandidateKind::kRetrievedSentence;
  SentenceRef source;
  double score = 0.0;
};

struct ResponseDecision {
  std::string reply;
  Origin origin = Origin::kChitchat;
  std::optional<double> score;
  std::vector<TraceEntry> trace;  // candidate-set order

  // Trace is emitted sorted by score descending (stable).
  nlohmann::json to_json() const;
};

class DialogueManager {
 public:
  // `scorer` may be null, in which case every turn goes to chit-chat.
  DialogueManager(const DocumentStore &docs, ManagerConfig config,
                  std::shared_ptr<const CandidateScorer> scorer,
                  std::shared_ptr<ChitchatEngine> chitchat, Clock clock = system_clock());

  // Throws ValidationError for unknown documents.
  std::string create_session(std::vector<std::string> doc_ids);
  std::vector<Utterance> history(const std::string &session_id) const;
  std::vector<std::string> session_documents(const std::string &session_id) const;
  size_t expire_sessions(int64_t ttl_ms) { return sessions_.expire(ttl_ms); }
  size_t num_sessions() const { return sessions_.size(); }

  // One full turn; serialized per session.
  ResponseDecision handle_message(const std::string &session_id, std::string_view text);

  bool model_loaded() const { return scorer_ != nullptr; }
  const ManagerConfig &config() const { return config_; }

 private:
  const DocumentStore &docs_;
  ManagerConfig config_;
  std::shared_ptr<const CandidateScorer> scorer_;
  std::shared_ptr<ChitchatEngine> chitchat_;
  SessionStore sessions_;
};

}  // namespace docbot
