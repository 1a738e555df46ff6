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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "docbot/candidate_gen.hpp"
#include "docbot/chitchat.hpp"
#include "docbot/dialogue_manager.hpp"
#include "docbot/error.hpp"
#include "docbot/gradient_suite.hpp"
#include "docbot/matcher.hpp"
#include "docbot/recall.hpp"
#include "docbot/service.hpp"
#include "docbot/synthetic.hpp"
#include "docbot/text_prep.hpp"

namespace py = pybind11;
using namespace docbot;
using nlohmann::json;

namespace {

py::object to_py(const json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object &o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::dict sentence_dict(const Sentence &s) {
  py::dict d;
  d["doc_id"] = s.doc_id;
  d["index"] = s.index;
  d["text"] = s.text;
  return d;
}

// Owns the document store a dialogue manager refers to.
class Bot {
 public:
  Bot(std::shared_ptr<DocumentStore> docs, std::shared_ptr<const MatcherModel> model,
      double threshold, std::vector<std::string> canned,
      std::shared_ptr<const Seq2SeqModel> chitchat_model)
      : docs_(std::move(docs)) {
    ManagerConfig cfg;
    cfg.score_threshold = threshold;
    std::shared_ptr<const CandidateScorer> scorer;
    if (model) {
      cfg.max_utterances = model->hyper().max_utterances;
      scorer = std::make_shared<MatcherScorer>(model);
    }
    if (canned.empty()) {
      canned = load_canned_responses(default_resource_dir() + "/canned_responses.txt");
    }
    auto engine = std::make_shared<ChitchatEngine>(std::move(canned), cfg.decode);
    if (chitchat_model) engine->set_model(std::move(chitchat_model));
    manager_ = std::make_unique<DialogueManager>(*docs_, cfg, scorer, engine);
  }

  std::string create_session(const std::vector<std::string> &doc_ids) {
    return manager_->create_session(doc_ids);
  }
  json send(const std::string &session, const std::string &text) {
    return manager_->handle_message(session, text).to_json();
  }
  std::vector<std::pair<std::string, std::string>> history(const std::string &session) const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Utterance &u : manager_->history(session)) {
      out.emplace_back(std::string(role_name(u.role)), u.text);
    }
    return out;
  }

 private:
  std::shared_ptr<DocumentStore> docs_;
  std::unique_ptr<DialogueManager> manager_;
};

}  // namespace

PYBIND11_MODULE(_docbot, m) {
  m.doc() = "Document-grounded multi-turn chatbot engine";

  py::register_exception<Error>(m, "DocbotError", PyExc_RuntimeError);

  m.def("resource_dir", &default_resource_dir);

  m.def(
      "preprocess",
      [](const std::string &text, const std::string &doc_id) {
        std::vector<std::string> out;
        for (const Sentence &s : preprocess_document({doc_id, text, {}}, default_resources())) {
          out.push_back(s.text);
        }
        return out;
      },
      py::arg("text"), py::arg("doc_id") = "doc",
      "Coreference-resolved sentences of a document.");

  m.def(
      "extract_triples",
      [](const std::string &text) {
        std::vector<std::tuple<std::string, std::string, std::string>> out;
        for (const Sentence &s : preprocess_document({"doc", text, {}}, default_resources())) {
          for (const SvoTriple &t : extract_triples(s)) {
            out.emplace_back(t.subject.text, t.verb_phrase.text, t.object.text);
          }
        }
        return out;
      },
      py::arg("text"));

  py::class_<DocumentStore, std::shared_ptr<DocumentStore>>(m, "DocumentStore")
      .def(py::init([](const std::string &dir) {
             auto store = std::make_shared<DocumentStore>(default_resources(), dir);
             if (!dir.empty()) store->load();
             return store;
           }),
           py::arg("data_dir") = "")
      .def(
          "add",
          [](DocumentStore &s, const std::string &text, std::optional<std::string> title,
             const std::string &doc_id) {
            return to_py(s.add({doc_id, text, std::move(title)}).to_json());
          },
          py::arg("text"), py::arg("title") = py::none(), py::arg("doc_id") = "")
      .def("documents",
           [](const DocumentStore &s) {
             json arr = json::array();
             for (const auto &d : s.list()) arr.push_back(d.to_json());
             return to_py(arr);
           })
      .def("sentences",
           [](const DocumentStore &s, const std::string &id) {
             std::vector<std::string> out;
             for (const auto &x : s.sentences(id)) out.push_back(x.text);
             return out;
           })
      .def(
          "retrieve",
          [](const DocumentStore &s, const std::vector<std::string> &ids, const std::string &msg,
             int k) {
            RetrievalConfig cfg;
            cfg.k = k;
            py::list out;
            for (const Sentence &x : s.retrieve(ids, msg, cfg)) out.append(sentence_dict(x));
            return out;
          },
          py::arg("doc_ids"), py::arg("message"), py::arg("k") = 2)
      .def(
          "candidates",
          [](const DocumentStore &s, const std::vector<std::string> &ids, const std::string &msg,
             int k) {
            RetrievalConfig cfg;
            cfg.k = k;
            const auto retrieved = s.retrieve(ids, msg, cfg);
            py::list out;
            for (const Candidate &c : generate_candidates(retrieved).candidates) {
              py::dict d;
              d["text"] = c.text;
              d["kind"] = std::string(candidate_kind_name(c.kind));
              d["doc_id"] = c.source.doc_id;
              d["sentence_index"] = c.source.index;
              out.append(d);
            }
            return out;
          },
          py::arg("doc_ids"), py::arg("message"), py::arg("k") = 2)
      .def("__len__", &DocumentStore::size)
      .def("__contains__", &DocumentStore::contains);

  py::class_<MatcherModel, std::shared_ptr<MatcherModel>>(m, "MatcherModel")
      .def_static("load", [](const std::string &path) {
        return std::make_shared<MatcherModel>(MatcherModel::load(path));
      })
      .def("save", &MatcherModel::save)
      .def("serialize", [](const MatcherModel &mm) { return py::bytes(mm.serialize()); })
      .def_property_readonly("hyper", [](const MatcherModel &mm) { return to_py(mm.hyper().to_json()); })
      .def_property_readonly("vocab_size", [](const MatcherModel &mm) { return mm.vocab().size(); })
      .def(
          "score",
          [](const MatcherModel &mm, const std::vector<std::string> &context,
             const std::vector<std::string> &responses) {
            py::gil_scoped_release release;
            return mm.score_candidates(context, responses);
          },
          py::arg("context"), py::arg("responses"));

  m.def(
      "train_matcher",
      [](const std::string &data, const py::dict &hyper, const std::string &valid) {
        json hj = HyperParams{}.to_json();
        const json overrides = from_py(hyper);
        for (auto &[k, v] : overrides.items()) hj[k] = v;
        const HyperParams hp = HyperParams::from_json(hj);
        hp.validate();
        const auto train = load_dialogue_jsonl(data);
        std::vector<ExampleGroup> groups;
        TrainOptions opts;
        if (!valid.empty()) {
          groups = group_by_context(load_dialogue_jsonl(valid));
          opts.valid = &groups;
        }
        py::gil_scoped_release release;
        return std::make_shared<MatcherModel>(train_matcher(train, hp, opts).model);
      },
      py::arg("data"), py::arg("hyper") = py::dict(), py::arg("valid") = "",
      "Train on a dialogue JSONL file; hyper overrides individual hyperparameters.");

  m.def(
      "evaluate",
      [](const MatcherModel &mm, const std::string &data, size_t n, const std::vector<int> &ks) {
        const auto groups = group_fixed(load_dialogue_jsonl(data), n);
        EvalReport r;
        {
          py::gil_scoped_release release;
          r = evaluate_matcher(mm, groups, ks);
        }
        return to_py(r.to_json());
      },
      py::arg("model"), py::arg("data"), py::arg("n") = 10, py::arg("ks") = std::vector<int>{1, 2, 5});

  m.def(
      "generate_corpus",
      [](const std::string &out, size_t contexts, size_t eval_contexts, size_t candidates,
         uint64_t seed) {
        SyntheticConfig cfg;
        cfg.train_contexts = contexts;
        cfg.eval_contexts = eval_contexts;
        cfg.candidates = candidates;
        cfg.seed = seed;
        write_corpus(generate_corpus(cfg), out);
      },
      py::arg("out_dir"), py::arg("contexts") = 5000, py::arg("eval_contexts") = 500,
      py::arg("candidates") = 10, py::arg("seed") = 7);

  py::class_<Seq2SeqModel, std::shared_ptr<Seq2SeqModel>>(m, "ChitchatModel")
      .def_static("load", [](const std::string &path) {
        return std::make_shared<Seq2SeqModel>(Seq2SeqModel::load(path));
      })
      .def("save", &Seq2SeqModel::save)
      .def(
          "generate",
          [](const Seq2SeqModel &s, const std::string &query, size_t beam_width, size_t max_len) {
            DecodeConfig cfg;
            cfg.max_len = max_len;
            if (beam_width > 1) {
              cfg.strategy = DecodeConfig::Strategy::kBeam;
              cfg.beam_width = beam_width;
            }
            cfg.validate();
            return s.generate(query, cfg);
          },
          py::arg("query"), py::arg("beam_width") = 1, py::arg("max_len") = 20);

  m.def(
      "train_chitchat",
      [](const std::string &pairs, size_t epochs, size_t hidden, uint64_t seed) {
        Seq2SeqHyper hp;
        hp.epochs = epochs;
        hp.embed_dim = hp.hidden_dim = hidden;
        hp.seed = seed;
        hp.validate();
        const auto data = load_pairs_jsonl(pairs);
        py::gil_scoped_release release;
        return std::make_shared<Seq2SeqModel>(train_seq2seq(data, hp).model);
      },
      py::arg("pairs"), py::arg("epochs") = 20, py::arg("hidden") = 32, py::arg("seed") = 1);

  py::class_<Bot>(m, "Bot")
      .def(py::init<std::shared_ptr<DocumentStore>, std::shared_ptr<const MatcherModel>, double,
                    std::vector<std::string>, std::shared_ptr<const Seq2SeqModel>>(),
           py::arg("store"), py::arg("model") = nullptr, py::arg("threshold") = 0.3,
           py::arg("canned") = std::vector<std::string>{}, py::arg("chitchat_model") = nullptr)
      .def("create_session", &Bot::create_session, py::arg("doc_ids") = std::vector<std::string>{})
      .def(
          "send",
          [](Bot &b, const std::string &session, const std::string &text) {
            json j;
            {
              py::gil_scoped_release release;
              j = b.send(session, text);
            }
            return to_py(j);
          },
          py::arg("session"), py::arg("text"))
      .def("history", &Bot::history);

  py::class_<Service>(m, "Service")
      .def(py::init([](const std::string &config, const std::string &base_dir) {
             return std::make_unique<Service>(ServiceConfig::parse(config, base_dir));
           }),
           py::arg("config") = "", py::arg("base_dir") = ".")
      .def(
          "handle",
          [](Service &s, const std::string &method, const std::string &path,
             const std::string &body) {
            HttpResponse r;
            {
              py::gil_scoped_release release;
              r = s.handle(method, path, body);
            }
            return py::make_tuple(r.status, to_py(json::parse(r.body)));
          },
          py::arg("method"), py::arg("path"), py::arg("body") = "",
          "Route one JSON API request; returns (status, parsed body).");

  m.def("gradient_suite", [](uint64_t seed) {
    py::list out;
    for (const auto &r : full_gradient_suite(seed)) {
      py::dict d;
      d["name"] = r.name;
      d["passed"] = r.passed;
      d["max_rel_error"] = r.max_rel_error;
      d["checked"] = r.checked;
      out.append(d);
    }
    return out;
  }, py::arg("seed") = 7);
}
