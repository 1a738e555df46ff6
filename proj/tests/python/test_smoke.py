# Copyright 2026 The docbot Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import json
import os

import pytest

import docbot

DATA = os.environ.get("DOCBOT_TEST_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))
SAMPLE = os.path.join(DATA, "sample_product.txt")


def sample_text():
    with open(SAMPLE, encoding="utf-8") as f:
        return f.read()


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    docbot.generate_corpus(str(out), contexts=300, eval_contexts=50, seed=3)
    return out


@pytest.fixture(scope="module")
def model(corpus):
    hyper = {"embed_dim": 16, "hidden_dim": 16, "max_tokens": 12, "max_utterances": 6,
             "match_dim": 16, "epochs": 2, "seed": 4}
    return docbot.train_matcher(str(corpus / "train.jsonl"), hyper, str(corpus / "valid.jsonl"))


def test_preprocess_resolves_pronouns():
    sentences = docbot.preprocess(sample_text())
    assert len(sentences) == 10
    assert sentences[1] == "The Aurora X1 weighs 1.2 kilograms."


def test_extract_triples():
    assert docbot.extract_triples("The laptop weighs 1.8 kg.") == [("The laptop", "weighs", "1.8 kg")]


def test_store_retrieve_and_candidates():
    store = docbot.DocumentStore()
    info = store.add(sample_text(), title="Aurora X1")
    assert info["n_sentences"] == 10
    assert info["doc_id"] in store and len(store) == 1
    hits = store.retrieve([info["doc_id"]], "how long is the warranty ?")
    assert 1 <= len(hits) <= 2
    assert "warranty" in hits[0]["text"]
    kinds = {c["kind"] for c in store.candidates([info["doc_id"]], "how long is the warranty ?")}
    assert "retrieved-sentence" in kinds
    with pytest.raises(docbot.DocbotError):
        store.add("   ")


def test_train_evaluate_and_reload(model, corpus, tmp_path):
    assert model.hyper["hidden_dim"] == 16
    report = docbot.evaluate(model, str(corpus / "test.jsonl"), n=10, ks=[1, 2, 5])
    assert report["num_contexts"] == 50
    recalls = report["recalls"]
    assert 0.0 <= recalls["R10@1"] <= recalls["R10@2"] <= recalls["R10@5"] <= 1.0

    path = tmp_path / "m.bin"
    model.save(str(path))
    loaded = docbot.MatcherModel.load(str(path))
    assert loaded.serialize() == model.serialize()
    assert docbot.evaluate(loaded, str(corpus / "test.jsonl")) == docbot.evaluate(model, str(corpus / "test.jsonl"))
    scores = loaded.score(["do you sell laptops ?"], ["yes we do", "the sky is blue"])
    assert len(scores) == 2 and all(0.0 < s < 1.0 for s in scores)

    with pytest.raises(docbot.DocbotError):
        docbot.MatcherModel.load(str(tmp_path / "missing.bin"))


def test_bot_threshold_and_history(model):
    store = docbot.DocumentStore()
    doc_id = store.add(sample_text())["doc_id"]
    plain = docbot.Bot(store, canned=["canned"])
    sid = plain.create_session([doc_id])
    d = plain.send(sid, "hello there")
    assert d["origin"] == "chitchat" and d["reply"] == "canned"

    eager = docbot.Bot(store, model, threshold=0.0)
    sid = eager.create_session([doc_id])
    d = eager.send(sid, "how long does the battery last ?")
    assert d["origin"] == "matched"
    assert d["reply"] in {c["text"] for c in d["trace"]}
    assert [r for r, _ in eager.history(sid)] == ["user", "bot"]


def test_service_json_api(tmp_path):
    service = docbot.Service("data_dir = %s\n" % (tmp_path / "state"))
    status, body = service.handle("GET", "/api/health")
    assert status == 200 and body["status"] == "ok" and body["model_loaded"] is False

    status, body = service.handle("POST", "/api/documents", json.dumps({"text": sample_text()}))
    assert status == 201 and body["n_sentences"] == 10
    doc_id = body["doc_id"]

    status, body = service.handle("POST", "/api/sessions", json.dumps({"doc_ids": [doc_id]}))
    assert status == 201
    sid = body["session_id"]
    status, body = service.handle("POST", "/api/sessions/%s/messages" % sid, json.dumps({"text": "hi"}))
    assert status == 200 and body["origin"] == "chitchat"

    status, body = service.handle("GET", "/api/sessions/nope")
    assert status == 404 and set(body) == {"status", "code", "message"}
    assert body["code"] == "session_not_found"


def test_chitchat_round_trip(tmp_path):
    pairs = tmp_path / "pairs.jsonl"
    pairs.write_text(json.dumps({"query": "how are you ?", "reply": "fine thanks"}) + "\n")
    chat = docbot.train_chitchat(str(pairs), epochs=150, hidden=8, seed=5)
    assert chat.generate("how are you ?") == "fine thanks"
    assert chat.generate("how are you ?", beam_width=3) == "fine thanks"
    chat.save(str(tmp_path / "c.bin"))
    assert docbot.ChitchatModel.load(str(tmp_path / "c.bin")).generate("how are you ?") == "fine thanks"


def test_gradient_suite():
    results = docbot.gradient_suite()
    assert results and all(r["passed"] for r in results)
    assert any(r["name"] == "matcher_loss" for r in results)
