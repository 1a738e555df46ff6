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

#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>
#include <thread>

#include "doctest.h"
#include "docbot/dialogue_manager.hpp"
#include "docbot/error.hpp"
#include "docbot/strings.hpp"

using namespace docbot;
namespace fs = std::filesystem;

namespace {

const std::string kData = DOCBOT_TEST_DATA_DIR;

const TextResources &resources() {
  static const TextResources r = TextResources::load(kData);
  return r;
}

// Scores by case-insensitive substring rules, first match wins; `fallback`
// otherwise. Records the last context it saw.
class StubScorer : public CandidateScorer {
 public:
  explicit StubScorer(double fallback) : fallback_(fallback) {}
  StubScorer &when(std::string needle, double score) {
    rules_.emplace_back(ascii_lower(needle), score);
    return *this;
  }
  std::vector<double> score(const std::vector<std::string> &context,
                            const std::vector<std::string> &candidates) const override {
    {
      std::lock_guard lock(mu_);
      last_context_ = context;
    }
    std::vector<double> out;
    for (const auto &c : candidates) {
      double s = fallback_;
      for (const auto &[needle, v] : rules_) {
        if (ascii_lower(c).find(needle) != std::string::npos) {
          s = v;
          break;
        }
      }
      out.push_back(s);
    }
    return out;
  }
  std::vector<std::string> last_context() const {
    std::lock_guard lock(mu_);
    return last_context_;
  }

 private:
  double fallback_;
  std::vector<std::pair<std::string, double>> rules_;
  mutable std::mutex mu_;
  mutable std::vector<std::string> last_context_;
};

struct Fixture {
  DocumentStore docs{resources()};
  std::string doc_id;
  int64_t now = 1000;

  Fixture() { doc_id = docs.add({"", read_file(kData + "/sample_product.txt"), "Aurora X1"}).doc_id; }

  DialogueManager manager(std::shared_ptr<const CandidateScorer> scorer, ManagerConfig cfg = {}) {
    return DialogueManager(docs, cfg, std::move(scorer),
                           std::make_shared<ChitchatEngine>(std::vector<std::string>{"canned"}),
                           [this] { return now; });
  }
};

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> n{0};
    path = fs::temp_directory_path() /
           ("docbot_dm_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("document store counts sentences and triples") {
  Fixture f;
  auto info = f.docs.list().front();
  CHECK(info.n_sentences == 10);
  CHECK(info.n_triples == 10);
  CHECK(info.title == "Aurora X1");
  CHECK(f.docs.add({"", read_file(kData + "/sample_product.txt"), std::nullopt}).doc_id == f.doc_id);
  CHECK(f.docs.size() == 1);
  CHECK_THROWS_AS(f.docs.add({"", "  \n ", std::nullopt}), ValidationError);
  CHECK_THROWS_AS(f.docs.add({f.doc_id, "Other text.", std::nullopt}), ValidationError);
  CHECK_THROWS_AS(f.docs.add({"../x", "Text.", std::nullopt}), ValidationError);
  CHECK_THROWS_AS(f.docs.index("nope"), NotFoundError);
}

TEST_CASE("retrieval over several documents merges by score then source") {
  DocumentStore docs(resources());
  docs.add({"b", "The battery lasts long. The screen is big.", std::nullopt});
  docs.add({"a", "The battery lasts long. A battery is a battery.", std::nullopt});
  RetrievalConfig cfg;
  cfg.k = 10;
  auto hits = docs.retrieve({"b", "a", "b"}, "battery", cfg);
  REQUIRE(hits.size() == 3);
  // Per-document idf differs, so the merge must follow scores.
  std::vector<double> scores;
  for (const Sentence &s : hits) {
    scores.push_back(bm25_score(docs.index(s.doc_id), {"battery"},
                                docs.index(s.doc_id).ordinal_of({s.doc_id, s.index}), cfg));
  }
  CHECK(std::is_sorted(scores.rbegin(), scores.rend()));
  cfg.k = 1;
  CHECK(docs.retrieve({"a", "b"}, "battery", cfg).size() == 1);
  CHECK(docs.retrieve({"a", "b"}, "keyboard", cfg).empty());
}

TEST_CASE("documents survive a restart through the data directory") {
  TempDir dir;
  std::string id;
  std::string idx_bytes;
  {
    DocumentStore docs(resources(), dir.path.string());
    id = docs.add({"", read_file(kData + "/sample_product.txt"), "Aurora X1"}).doc_id;
    idx_bytes = docs.index(id).serialize();
  }
  CHECK(fs::exists(dir.path / (id + ".json")));
  CHECK(read_file((dir.path / (id + ".idx")).string()) == idx_bytes);
  {
    DocumentStore docs(resources(), dir.path.string());
    CHECK(docs.load() == 1);
    CHECK(docs.index(id).serialize() == idx_bytes);
    CHECK(docs.list().front().title == "Aurora X1");
  }
  write_file((dir.path / (id + ".idx")).string(), "garbage");
  {
    DocumentStore docs(resources(), dir.path.string());
    CHECK(docs.load() == 1);
    CHECK(read_file((dir.path / (id + ".idx")).string()) == idx_bytes);
    CHECK(docs.rebuild_indexes() == 1);
    CHECK(read_file((dir.path / (id + ".idx")).string()) == idx_bytes);
  }
}

TEST_CASE("threshold boundary with a stub scorer") {
  Fixture f;
  SUBCASE("all candidates at 0.29 fall back to chit-chat") {
    auto dm = f.manager(std::make_shared<StubScorer>(0.29));
    auto d = dm.handle_message(dm.create_session({f.doc_id}), "how long does the battery last ?");
    CHECK(d.origin == Origin::kChitchat);
    CHECK(d.reply == "canned");
    REQUIRE(d.score);
    CHECK(*d.score == 0.29);
    CHECK(!d.trace.empty());
  }
  SUBCASE("a candidate at exactly 0.30 is accepted") {
    auto scorer = std::make_shared<StubScorer>(0.29);
    scorer->when("in 40 minutes", 0.30);
    auto dm = f.manager(scorer);
    auto d = dm.handle_message(dm.create_session({f.doc_id}), "how long does the battery last ?");
    CHECK(d.origin == Origin::kMatched);
    CHECK(d.reply == "The charger fills the battery to 80 percent in 40 minutes.");
    CHECK(*d.score == 0.30);
  }
  SUBCASE("configured threshold is honored") {
    ManagerConfig cfg;
    cfg.score_threshold = 0.5;
    auto dm = f.manager(std::make_shared<StubScorer>(0.49), cfg);
    CHECK(dm.handle_message(dm.create_session({f.doc_id}), "battery").origin == Origin::kChitchat);
    cfg.score_threshold = 1.5;
    CHECK_THROWS_AS(f.manager(std::make_shared<StubScorer>(0.5), cfg), ConfigError);
  }
}

TEST_CASE("highest score wins and ties go to the earliest candidate") {
  Fixture f;
  auto scorer = std::make_shared<StubScorer>(0.1);
  scorer->when("14 hours on a single charge.", 0.9);
  auto dm = f.manager(scorer);
  std::string sid = dm.create_session({f.doc_id});
  auto d = dm.handle_message(sid, "how long does the battery last ?");
  CHECK(d.origin == Origin::kMatched);
  CHECK(d.reply == "The battery lasts 14 hours on a single charge.");
  CHECK(*d.score == 0.9);

  auto tie = f.manager(std::make_shared<StubScorer>(0.7));
  auto t = tie.handle_message(tie.create_session({f.doc_id}), "how long does the battery last ?");
  REQUIRE(t.trace.size() == 3);
  CHECK(t.trace[0].kind == CandidateKind::kRetrievedSentence);
  CHECK(t.reply == t.trace[0].text);
  // Serialized trace is sorted by score and keeps candidate order on ties.
  auto j = d.to_json();
  CHECK(j["trace"][0]["score"] == 0.9);
  CHECK(j["origin"] == "matched");
  CHECK(t.to_json()["trace"][0]["text"] == t.trace[0].text);
}

TEST_CASE("no bound document or no model goes straight to chit-chat") {
  Fixture f;
  auto dm = f.manager(std::make_shared<StubScorer>(1.0));
  auto d = dm.handle_message(dm.create_session({}), "hello there");
  CHECK(d.origin == Origin::kChitchat);
  CHECK(d.trace.empty());
  CHECK(!d.score);
  CHECK(!d.to_json().contains("score"));

  auto bare = f.manager(nullptr);
  CHECK(!bare.model_loaded());
  auto b = bare.handle_message(bare.create_session({f.doc_id}), "battery");
  CHECK(b.origin == Origin::kChitchat);

  auto miss = dm.handle_message(dm.create_session({f.doc_id}), "zebra");
  CHECK(miss.trace.empty());
  CHECK(miss.origin == Origin::kChitchat);
}

TEST_CASE("decisions are sound for random scores") {
  Fixture f;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 0.6);
  const char *questions[] = {"battery", "screen", "the aurora x1", "warranty repairs", "dollars"};
  for (int trial = 0; trial < 200; ++trial) {
    auto scorer = std::make_shared<StubScorer>(u(gen));
    for (const char *w : {"battery", "screen", "aurora", "warranty", "charger", "laptop"}) {
      scorer->when(w, u(gen));
    }
    auto dm = f.manager(scorer);
    auto d = dm.handle_message(dm.create_session({f.doc_id}), questions[trial % 5]);
    double best = -1;
    for (const auto &t : d.trace) best = std::max(best, t.score);
    if (d.origin == Origin::kMatched) {
      CHECK(*d.score == best);
      CHECK(best >= 0.3);
      auto it = std::find_if(d.trace.begin(), d.trace.end(),
                             [&](const TraceEntry &t) { return t.score == best; });
      CHECK(it->text == d.reply);
    } else {
      CHECK(best < 0.3);
    }
  }
}

TEST_CASE("history window, matcher context and bot turns") {
  Fixture f;
  ManagerConfig cfg;
  cfg.max_utterances = 3;
  auto scorer = std::make_shared<StubScorer>(0.9);
  auto dm = f.manager(scorer, cfg);
  std::string sid = dm.create_session({f.doc_id});
  for (int i = 0; i < 7; ++i) dm.handle_message(sid, "battery question " + std::to_string(i));
  auto h = dm.history(sid);
  REQUIRE(h.size() == 6);
  CHECK(h[0].text == "battery question 4");
  CHECK(h[0].role == Role::kUser);
  CHECK(h[1].role == Role::kBot);
  CHECK(h[5].role == Role::kBot);
  auto ctx = scorer->last_context();
  REQUIRE(ctx.size() == 3);
  CHECK(ctx.back() == "battery question 6");
  CHECK(ctx[1] == h[3].text);

  cfg.include_bot_turns = false;
  auto users = f.manager(scorer, cfg);
  std::string s2 = users.create_session({f.doc_id});
  for (int i = 0; i < 4; ++i) users.handle_message(s2, "battery " + std::to_string(i));
  CHECK(scorer->last_context() == std::vector<std::string>{"battery 1", "battery 2", "battery 3"});
  CHECK_THROWS_AS(users.handle_message(s2, "   "), ValidationError);
}

TEST_CASE("identical state gives identical decisions") {
  Fixture f;
  auto scorer = std::make_shared<StubScorer>(0.2);
  scorer->when("battery", 0.6);
  auto a = f.manager(scorer);
  auto b = f.manager(scorer);
  std::string sa = a.create_session({f.doc_id}), sb = b.create_session({f.doc_id});
  for (const char *m : {"hello", "how long does the battery last ?", "and the screen ?"}) {
    CHECK(a.handle_message(sa, m).to_json() == b.handle_message(sb, m).to_json());
  }
}

TEST_CASE("session lifecycle and expiry") {
  Fixture f;
  auto dm = f.manager(std::make_shared<StubScorer>(0.9));
  std::string s1 = dm.create_session({f.doc_id});
  std::string s2 = dm.create_session({});
  CHECK(s1 != s2);
  CHECK(dm.session_documents(s1) == std::vector<std::string>{f.doc_id});
  CHECK_THROWS_AS(dm.create_session({"missing"}), ValidationError);
  CHECK_THROWS_AS(dm.handle_message("s-99999999", "hi"), SessionError);
  CHECK_THROWS_AS(dm.history("nope"), SessionError);

  f.now = 2000;
  dm.handle_message(s1, "battery");
  CHECK(dm.expire_sessions(1000) == 1);  // s2 idle since 1000
  CHECK_THROWS_AS(dm.history(s2), SessionError);
  CHECK(dm.expire_sessions(1001) == 0);
  f.now = 3000;
  CHECK(dm.expire_sessions(1001) == 0);
  CHECK(dm.expire_sessions(1000) == 1);
  std::string s3 = dm.create_session({});
  CHECK(s3 != s1);
  CHECK(s3 != s2);
  CHECK(dm.expire_sessions(0) == 1);
  CHECK(dm.num_sessions() == 0);
}

TEST_CASE("interleaved sessions keep separate histories") {
  Fixture f;
  auto dm = f.manager(std::make_shared<StubScorer>(0.9));
  std::string a = dm.create_session({f.doc_id}), b = dm.create_session({f.doc_id});
  dm.handle_message(a, "battery a1");
  dm.handle_message(b, "screen b1");
  dm.handle_message(a, "battery a2");
  auto ha = dm.history(a), hb = dm.history(b);
  REQUIRE(ha.size() == 4);
  REQUIRE(hb.size() == 2);
  CHECK(ha[0].text == "battery a1");
  CHECK(ha[2].text == "battery a2");
  CHECK(hb[0].text == "screen b1");
}

TEST_CASE("concurrent turns serialize per session") {
  Fixture f;
  auto dm = f.manager(std::make_shared<StubScorer>(0.9));
  std::vector<std::string> ids;
  for (int i = 0; i < 8; ++i) ids.push_back(dm.create_session({f.doc_id}));
  std::vector<std::thread> threads;
  for (int t = 0; t < 16; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 2; ++i) dm.handle_message(ids[t % 8], "battery " + std::to_string(t));
    });
  }
  for (auto &th : threads) th.join();
  for (int s = 0; s < 8; ++s) {
    auto h = dm.history(ids[s]);
    REQUIRE(h.size() == 8);
    for (size_t i = 0; i < h.size(); ++i) {
      CHECK(h[i].role == (i % 2 == 0 ? Role::kUser : Role::kBot));
      if (i % 2 == 0) {
        int t = std::stoi(h[i].text.substr(8));
        CHECK(t % 8 == s);
      }
    }
  }
}

TEST_CASE("matcher scorer returns zeros without known context tokens") {
  HyperParams hp;
  hp.embed_dim = 4;
  hp.hidden_dim = 4;
  hp.match_dim = 4;
  hp.max_tokens = 6;
  hp.max_utterances = 3;
  hp.conv_filters = 2;
  Vocabulary v;
  for (const char *w : {"battery", "hours", "screen"}) v.add(w);
  auto model = std::make_shared<MatcherModel>(MatcherModel::initialize(hp, v));
  MatcherScorer scorer(model);
  CHECK(scorer.score({"zebra ?"}, {"battery hours", "screen"}) == std::vector<double>{0.0, 0.0});
  auto s = scorer.score({"the battery"}, {"battery hours", "screen"});
  CHECK(s == model->score_candidates({"the battery"}, {"battery hours", "screen"}));
  CHECK_THROWS_AS(MatcherScorer(nullptr), UsageError);
}
