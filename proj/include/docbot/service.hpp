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
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "docbot/dialogue_manager.hpp"

namespace httplib {
class Server;
}

namespace docbot {

// Service settings. The file format is one "key = value" per line with
// '#' comments. Relative paths are resolved against the file's directory.
struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "docbot-data";  // documents live in <data_dir>/documents
  std::string resource_dir;              // tagger lexicon etc.; empty = default
  std::string matcher_model;             // empty = no model, chit-chat only
  std::string chitchat_model;
  std::string canned_responses;  // empty = <resource_dir>/canned_responses.txt
  std::string static_dir;        // served under / when set
  double score_threshold = 0.3;
  int retrieval_k = 2;
  bool include_bot_turns = true;
  int64_t session_ttl_seconds = 1800;
  size_t max_document_bytes = 1 << 20;

  // Throws ConfigError on unknown keys or bad values.
  static ServiceConfig parse(std::string_view text, const std::string &base_dir = {});
  static ServiceConfig load(const std::string &path);
  // DOCBOT_LISTEN ("host:port") and DOCBOT_DATA_DIR.
  void apply_env();
  void set_listen(std::string_view listen);
  void validate() const;
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// JSON body of every non-2xx response: {"status", "code", "message"}.
HttpResponse api_error(int status, std::string_view code, std::string_view message);

class Service {
 public:
  explicit Service(ServiceConfig config, Clock clock = system_clock());
  ~Service();

  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  // Routes one API request without any socket involved.
  HttpResponse handle(std::string_view method, std::string_view path, std::string_view body);

  // Binds and serves until stop(). Returns false when binding fails.
  bool listen();
  // Binds to an ephemeral port; serve with listen_after_bind().
  int bind_any_port();
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

  size_t expire_sessions();

  const ServiceConfig &config() const { return config_; }
  DialogueManager &manager() { return *manager_; }
  DocumentStore &documents() { return *docs_; }

 private:
  void install_routes();
  void start_sweeper();
  nlohmann::json health() const;

  ServiceConfig config_;
  TextResources resources_;
  std::unique_ptr<DocumentStore> docs_;
  std::shared_ptr<const MatcherModel> matcher_;
  std::shared_ptr<const Seq2SeqModel> seq2seq_;
  std::unique_ptr<DialogueManager> manager_;
  std::unique_ptr<httplib::Server> server_;

  std::mutex sweep_mu_;
  std::condition_variable sweep_cv_;
  bool stopping_ = false;
  std::thread sweeper_;
};

}  // namespace docbot
