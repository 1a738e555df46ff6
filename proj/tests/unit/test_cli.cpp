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
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <regex>
#include <string>
#include <algorithm>
#include <map>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "docbot/strings.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = DOCBOT_TEST_DATA_DIR;
const std::string kCli = DOCBOT_CLI_PATH;

struct TempDir {
  fs::path path;
  TempDir() {
    static std::atomic<int> n{0};
    path = fs::temp_directory_path() /
           ("docbot-cli-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string &name) const { return (path / name).string(); }
};

struct Run {
  int code = -1;
  std::string out, err;
};

Run run(const TempDir &tmp, const std::string &args, const std::string &stdin_file = "/dev/null") {
  const std::string out = tmp / "stdout.txt", err = tmp / "stderr.txt";
  const std::string cmd = "'" + kCli + "' " + args + " <'" + stdin_file + "' >'" + out + "' 2>'" +
                          err + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = docbot::read_file(out);
  r.err = docbot::read_file(err);
  return r;
}

size_t count_lines(const std::string &s) { return std::count(s.begin(), s.end(), '\n'); }

// scorer name -> column values as printed
std::map<std::string, std::vector<std::string>> parse_table(const std::string &text) {
  std::map<std::string, std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name, contexts, v;
    ls >> name >> contexts;
    while (ls >> v) rows[name].push_back(v);
  }
  return rows;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

TEST_CASE("gen-data is byte-identical for equal seeds") {
  TempDir tmp;
  REQUIRE(run(tmp, "gen-data --out " + (tmp / "a") + " --contexts 200 --eval-contexts 40 --seed 7")
              .code == 0);
  REQUIRE(run(tmp, "gen-data --out " + (tmp / "b") + " --contexts 200 --eval-contexts 40 --seed 7")
              .code == 0);
  REQUIRE(run(tmp, "gen-data --out " + (tmp / "c") + " --contexts 200 --eval-contexts 40 --seed 8")
              .code == 0);
  for (const char *f : {"train.jsonl", "valid.jsonl", "test.jsonl"}) {
    const std::string a = docbot::read_file(tmp / (std::string("a/") + f));
    CHECK(!a.empty());
    CHECK(a == docbot::read_file(tmp / (std::string("b/") + f)));
  }
  CHECK(docbot::read_file(tmp / "a/train.jsonl") != docbot::read_file(tmp / "c/train.jsonl"));
}

TEST_CASE("eval table and json agree") {
  TempDir tmp;
  REQUIRE(run(tmp, "gen-data --out " + (tmp / "d") + " --contexts 200 --eval-contexts 60 --seed 3")
              .code == 0);
  const std::string args = "eval --data " + (tmp / "d/test.jsonl") + " --n 10 --k 1,2,5 --oracle" +
                           " --random 11 --tfidf " + (tmp / "d/train.jsonl");
  Run table = run(tmp, args);
  REQUIRE(table.code == 0);
  Run js = run(tmp, args + " --json");
  REQUIRE(js.code == 0);

  CHECK(table.out.find("R10@1") != std::string::npos);
  auto rows = parse_table(table.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows["oracle"][0] == "1.0000");

  json j = json::parse(js.out);
  CHECK(j["num_contexts"] == 60);
  REQUIRE(j["results"].size() == 3);
  for (const auto &r : j["results"]) {
    const auto &cols = rows.at(r["scorer"].get<std::string>());
    REQUIRE(cols.size() == 3);
    CHECK(cols[0] == fmt4(r["recalls"]["R10@1"].get<double>()));
    CHECK(cols[1] == fmt4(r["recalls"]["R10@2"].get<double>()));
    CHECK(cols[2] == fmt4(r["recalls"]["R10@5"].get<double>()));
  }
}

TEST_CASE("train-matcher is seeded and beats tfidf") {
  TempDir tmp;
  REQUIRE(run(tmp, "gen-data --out " + (tmp / "d") + " --contexts 600 --eval-contexts 100 --seed 5")
              .code == 0);
  const std::string common = "train-matcher --data " + (tmp / "d/train.jsonl") + " --val " +
                             (tmp / "d/valid.jsonl") +
                             " --embed 16 --hidden 16 --max-tokens 12 --max-utterances 6"
                             " --match-dim 16 --seed 4";
  Run a = run(tmp, common + " --epochs 1 --out " + (tmp / "a.bin"));
  REQUIRE_MESSAGE(a.code == 0, a.err);
  Run b = run(tmp, common + " --epochs 1 --out " + (tmp / "b.bin"));
  REQUIRE(b.code == 0);
  CHECK(docbot::read_file(tmp / "a.bin") == docbot::read_file(tmp / "b.bin"));

  Run c = run(tmp, common + " --epochs 4 --out " + (tmp / "c.bin"));
  REQUIRE(c.code == 0);
  CHECK(c.out.find("saved") != std::string::npos);
  Run ev = run(tmp, "eval --json --model " + (tmp / "c.bin") + " --tfidf " +
                        (tmp / "d/train.jsonl") + " --data " + (tmp / "d/test.jsonl"));
  REQUIRE(ev.code == 0);
  json j = json::parse(ev.out);
  const double trained = j["results"][0]["recalls"]["R10@1"];
  const double tfidf = j["results"][1]["recalls"]["R10@1"];
  CHECK(trained > tfidf);
}

TEST_CASE("exit codes and diagnostics") {
  TempDir tmp;
  Run r = run(tmp, "");
  CHECK(r.code == 1);
  r = run(tmp, "eval --data x.jsonl --n abc --oracle");
  CHECK(r.code == 1);
  r = run(tmp, "eval --data " + (tmp / "missing.jsonl") + " --oracle");
  CHECK(r.code == 2);
  CHECK(count_lines(r.err) == 1);
  CHECK(r.err.rfind("docbot: error: ", 0) == 0);

  docbot::write_file(tmp / "bad.jsonl",
                     "{\"context\":[\"hi\"],\"response\":\"x\",\"label\":1}\n"
                     "{\"context\":[\"hi\"],\"response\":\"y\",\"label\":0}\n"
                     "{\"context\": oops\n");
  r = run(tmp, "eval --data " + (tmp / "bad.jsonl") + " --oracle");
  CHECK(r.code == 2);
  CHECK(count_lines(r.err) == 1);
  CHECK(r.err.find("line 3") != std::string::npos);

  REQUIRE(run(tmp, "gen-data --out " + (tmp / "d") + " --contexts 50 --eval-contexts 10").code == 0);
  r = run(tmp, "eval --data " + (tmp / "d/test.jsonl") + " --model " + (tmp / "none.bin"));
  CHECK(r.code == 3);
  docbot::write_file(tmp / "junk.bin", "not a model");
  r = run(tmp, "eval --data " + (tmp / "d/test.jsonl") + " --model " + (tmp / "junk.bin"));
  CHECK(r.code == 3);
  CHECK(count_lines(r.err) == 1);

  r = run(tmp, "serve --config " + (tmp / "none.conf"));
  CHECK(r.code == 1);
  r = run(tmp, "train-matcher --data " + (tmp / "d/train.jsonl") + " --out " + (tmp / "m.bin") +
                   " --doc " + kData + "/sample_product.txt");
  CHECK(r.code == 1);
}

TEST_CASE("ingest, index and chat") {
  TempDir tmp;
  const std::string store = tmp / "store";
  Run r = run(tmp, "ingest " + kData + "/sample_product.txt --data-dir " + store);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(std::regex_search(r.out, std::regex("^doc-[0-9a-f]{12}  sentences=10  triples=10")));
  r = run(tmp, "index --rebuild --data-dir " + store);
  CHECK(r.code == 0);
  CHECK(r.out.find("1 document(s), indexes rebuilt") != std::string::npos);
  r = run(tmp, "ingest " + (tmp / "nothing.txt") + " --data-dir " + store);
  CHECK(r.code == 2);

  docbot::write_file(tmp / "in.txt", "hello there\nhow are you ?\n");
  r = run(tmp, "chat --doc " + kData + "/sample_product.txt", tmp / "in.txt");
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(count_lines(r.out) == 2);
  CHECK(r.out.find("[chitchat]") != std::string::npos);
}

TEST_CASE("gradcheck passes") {
  TempDir tmp;
  Run r = run(tmp, "gradcheck");
  CHECK(r.code == 0);
  CHECK(r.out.find("matcher_loss") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
