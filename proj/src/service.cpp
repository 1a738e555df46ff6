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

#include "docbot/service.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>

#define CPPHTTPLIB_LISTEN_BACKLOG 256
#include <httplib.h>

#include "docbot/error.hpp"
#include "docbot/strings.hpp"

namespace docbot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool parse_bool(std::string_view key, std::string_view v) {
  const std::string s = ascii_lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + std::string(v) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::string resolve(const std::string &base, std::string_view v) {
  if (v.empty() || base.empty() || fs::path(v).is_absolute()) return std::string(v);
  return (fs::path(base) / fs::path(v)).lexically_normal().string();
}

std::vector<std::string_view> path_parts(std::string_view path) {
  std::vector<std::string_view> parts;
  size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) parts.push_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

HttpResponse ok(const json &j, int status = 200) { return {status, j.dump(), "application/json"}; }

json parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("request body must be a JSON object");
  return j;
}

std::string require_string(const json &j, const char *field) {
  auto it = j.find(field);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + field + "'");
  if (!it->is_string()) throw ValidationError(std::string("field '") + field + "' must be a string");
  return it->get<std::string>();
}

struct TooLarge : ValidationError {
  using ValidationError::ValidationError;
};

}  // namespace

ServiceConfig ServiceConfig::parse(std::string_view text, const std::string &base_dir) {
  ServiceConfig cfg;
  size_t lineno = 0;
  for (const std::string &raw : split(text, '\n')) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "listen") {
      cfg.set_listen(value);
    } else if (key == "data_dir") {
      cfg.data_dir = resolve(base_dir, value);
    } else if (key == "resource_dir") {
      cfg.resource_dir = resolve(base_dir, value);
    } else if (key == "matcher_model") {
      cfg.matcher_model = resolve(base_dir, value);
    } else if (key == "chitchat_model") {
      cfg.chitchat_model = resolve(base_dir, value);
    } else if (key == "canned_responses") {
      cfg.canned_responses = resolve(base_dir, value);
    } else if (key == "static_dir") {
      cfg.static_dir = resolve(base_dir, value);
    } else if (key == "score_threshold") {
      cfg.score_threshold = parse_number<double>(key, value);
    } else if (key == "retrieval_k") {
      cfg.retrieval_k = parse_number<int>(key, value);
    } else if (key == "include_bot_turns") {
      cfg.include_bot_turns = parse_bool(key, value);
    } else if (key == "session_ttl_seconds") {
      cfg.session_ttl_seconds = parse_number<int64_t>(key, value);
    } else if (key == "max_document_bytes") {
      cfg.max_document_bytes = parse_number<size_t>(key, value);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ServiceConfig ServiceConfig::load(const std::string &path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError &e) {
    throw ConfigError(e.what());
  }
  return parse(text, fs::path(path).parent_path().string());
}

void ServiceConfig::set_listen(std::string_view listen) {
  const size_t colon = listen.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError("listen: expected host:port");
  host = std::string(listen.substr(0, colon));
  port = parse_number<int>("listen", listen.substr(colon + 1));
  if (host.empty()) host = "0.0.0.0";
}

void ServiceConfig::apply_env() {
  if (const char *v = std::getenv("DOCBOT_LISTEN"); v && *v) set_listen(v);
  if (const char *v = std::getenv("DOCBOT_DATA_DIR"); v && *v) data_dir = v;
}

void ServiceConfig::validate() const {
  if (port < 0 || port > 65535) throw ConfigError("listen: port out of range");
  if (!(score_threshold >= 0 && score_threshold <= 1)) {
    throw ConfigError("score_threshold must be in [0, 1]");
  }
  if (retrieval_k < 1) throw ConfigError("retrieval_k must be >= 1");
  if (session_ttl_seconds < 0) throw ConfigError("session_ttl_seconds must be >= 0");
  if (max_document_bytes == 0) throw ConfigError("max_document_bytes must be positive");
  if (data_dir.empty()) throw ConfigError("data_dir must be set");
}

HttpResponse api_error(int status, std::string_view code, std::string_view message) {
  return {status, json{{"status", status}, {"code", code}, {"message", message}}.dump(),
          "application/json"};
}

Service::Service(ServiceConfig config, Clock clock) : config_(std::move(config)) {
  config_.validate();
  const std::string res_dir =
      config_.resource_dir.empty() ? default_resource_dir() : config_.resource_dir;
  resources_ = TextResources::load(res_dir);
  docs_ = std::make_unique<DocumentStore>(
      resources_, (fs::path(config_.data_dir) / "documents").string());
  docs_->load();

  ManagerConfig mc;
  mc.score_threshold = config_.score_threshold;
  mc.retrieval.k = config_.retrieval_k;
  mc.include_bot_turns = config_.include_bot_turns;
  std::shared_ptr<const CandidateScorer> scorer;
  if (!config_.matcher_model.empty()) {
    matcher_ = std::make_shared<const MatcherModel>(MatcherModel::load(config_.matcher_model));
    mc.max_utterances = matcher_->hyper().max_utterances;
    scorer = std::make_shared<MatcherScorer>(matcher_);
  }
  const std::string canned = config_.canned_responses.empty()
                                 ? (fs::path(res_dir) / "canned_responses.txt").string()
                                 : config_.canned_responses;
  auto chitchat = std::make_shared<ChitchatEngine>(load_canned_responses(canned), mc.decode);
  if (!config_.chitchat_model.empty()) {
    seq2seq_ = std::make_shared<const Seq2SeqModel>(Seq2SeqModel::load(config_.chitchat_model));
    chitchat->set_model(seq2seq_);
  }
  manager_ = std::make_unique<DialogueManager>(*docs_, mc, std::move(scorer), std::move(chitchat),
                                               std::move(clock));
}

Service::~Service() { stop(); }

json Service::health() const {
  return {{"status", "ok"},
          {"model_loaded", manager_->model_loaded()},
          {"chitchat_model_loaded", seq2seq_ != nullptr},
          {"index_docs", docs_->size()},
          {"sessions", manager_->num_sessions()},
          {"score_threshold", manager_->config().score_threshold}};
}

HttpResponse Service::handle(std::string_view method, std::string_view path,
                             std::string_view body) {
  const auto parts = path_parts(path);
  auto not_allowed = [&] {
    return api_error(405, "method_not_allowed",
                     std::string(method) + " not allowed on " + std::string(path));
  };
  if (parts.size() < 2 || parts[0] != "api") {
    return api_error(404, "not_found", "no such endpoint: " + std::string(path));
  }
  try {
    const std::string_view head = parts[1];
    if (head == "health" && parts.size() == 2) {
      if (method != "GET") return not_allowed();
      return ok(health());
    }
    if (head == "config" && parts.size() == 2) {
      if (method != "GET") return not_allowed();
      const ManagerConfig &mc = manager_->config();
      return ok({{"score_threshold", mc.score_threshold},
                 {"retrieval_k", mc.retrieval.k},
                 {"max_utterances", mc.max_utterances},
                 {"include_bot_turns", mc.include_bot_turns},
                 {"max_document_bytes", config_.max_document_bytes}});
    }
    if (head == "documents" && parts.size() == 2) {
      if (method == "GET") {
        json list = json::array();
        for (const DocumentInfo &d : docs_->list()) list.push_back(d.to_json());
        return ok({{"documents", list}});
      }
      if (method != "POST") return not_allowed();
      json req = parse_body(body);
      RawDocument doc;
      doc.text = require_string(req, "text");
      if (doc.text.size() > config_.max_document_bytes) {
        throw TooLarge("document exceeds " + std::to_string(config_.max_document_bytes) + " bytes");
      }
      if (req.contains("title") && !req["title"].is_null()) doc.title = require_string(req, "title");
      DocumentInfo info = docs_->add(std::move(doc));
      json out = {{"doc_id", info.doc_id},
                  {"n_sentences", info.n_sentences},
                  {"n_triples", info.n_triples}};
      return ok(out, 201);
    }
    if (head == "sessions") {
      if (parts.size() == 2) {
        if (method != "POST") return not_allowed();
        json req = body.empty() ? json::object() : parse_body(body);
        std::vector<std::string> ids;
        if (auto it = req.find("doc_ids"); it != req.end() && !it->is_null()) {
          if (!it->is_array()) throw ValidationError("field 'doc_ids' must be an array of strings");
          for (const json &v : *it) {
            if (!v.is_string()) throw ValidationError("field 'doc_ids' must be an array of strings");
            ids.push_back(v.get<std::string>());
          }
        }
        for (const std::string &id : ids) {
          if (!docs_->contains(id)) return api_error(404, "doc_not_found", "unknown document: " + id);
        }
        return ok({{"session_id", manager_->create_session(std::move(ids))}}, 201);
      }
      const std::string id(parts[2]);
      if (parts.size() == 3) {
        if (method != "GET") return not_allowed();
        json history = json::array();
        for (const Utterance &u : manager_->history(id)) {
          history.push_back(
              {{"role", role_name(u.role)}, {"text", u.text}, {"timestamp_ms", u.timestamp_ms}});
        }
        return ok({{"session_id", id},
                   {"doc_ids", manager_->session_documents(id)},
                   {"history", history}});
      }
      if (parts.size() == 4 && parts[3] == "messages") {
        if (method != "POST") return not_allowed();
        json req = parse_body(body);
        const std::string text = require_string(req, "text");
        return ok(manager_->handle_message(id, text).to_json());
      }
    }
    return api_error(404, "not_found", "no such endpoint: " + std::string(path));
  } catch (const TooLarge &e) {
    return api_error(413, "payload_too_large", e.what());
  } catch (const ValidationError &e) {
    return api_error(400, "bad_request", e.what());
  } catch (const SessionError &e) {
    return api_error(404, "session_not_found", e.what());
  } catch (const NotFoundError &e) {
    return api_error(404, "doc_not_found", e.what());
  } catch (const std::exception &e) {
    return api_error(500, "internal_error", e.what());
  }
}

size_t Service::expire_sessions() {
  return manager_->expire_sessions(config_.session_ttl_seconds * 1000);
}

void Service::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  if (!config_.static_dir.empty()) {
    if (!server_->set_mount_point("/", config_.static_dir)) {
      throw ConfigError("static_dir does not exist: " + config_.static_dir);
    }
  }
  server_->set_payload_max_length(config_.max_document_bytes + 64 * 1024);
  auto route = [this](const httplib::Request &req, httplib::Response &res) {
    HttpResponse r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server_->Get(".*", route);
  server_->Post(".*", route);
  server_->Put(".*", route);
  server_->Delete(".*", route);
  server_->Patch(".*", route);
  server_->set_exception_handler(
      [](const httplib::Request &, httplib::Response &res, std::exception_ptr) {
        HttpResponse r = api_error(500, "internal_error", "unhandled exception");
        res.status = r.status;
        res.set_content(r.body, r.content_type);
      });
  server_->set_error_handler([](const httplib::Request &req, httplib::Response &res) {
    if (!res.body.empty()) return;
    const char *code = res.status == 413 ? "payload_too_large" : "bad_request";
    if (res.status == 404) code = "not_found";
    HttpResponse r = api_error(res.status, code, "request to " + req.path + " failed");
    res.set_content(r.body, r.content_type);
  });
}

void Service::start_sweeper() {
  if (sweeper_.joinable()) return;
  const auto period = std::chrono::seconds(
      std::clamp<int64_t>(config_.session_ttl_seconds, 1, 60));
  sweeper_ = std::thread([this, period] {
    std::unique_lock lock(sweep_mu_);
    while (!stopping_) {
      sweep_cv_.wait_for(lock, period, [this] { return stopping_; });
      if (!stopping_) expire_sessions();
    }
  });
}

int Service::bind_any_port() {
  if (!server_) install_routes();
  return server_->bind_to_any_port(config_.host);
}

bool Service::listen_after_bind() {
  if (!server_) install_routes();
  start_sweeper();
  return server_->listen_after_bind();
}

bool Service::listen() {
  if (!server_) install_routes();
  if (!server_->bind_to_port(config_.host, config_.port)) return false;
  return listen_after_bind();
}

void Service::wait_until_ready() const {
  if (server_) server_->wait_until_ready();
}

void Service::stop() {
  {
    std::lock_guard lock(sweep_mu_);
    stopping_ = true;
  }
  sweep_cv_.notify_all();
  if (server_) server_->stop();
  if (sweeper_.joinable()) sweeper_.join();
}

}  // namespace docbot
