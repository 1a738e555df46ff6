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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "docbot/error.hpp"
#include "docbot/nn/gradcheck.hpp"
#include "docbot/nn/layers.hpp"
#include "docbot/nn/optimizer.hpp"

using namespace docbot;
using namespace docbot::nn;

namespace {

Tensor random_tensor(Shape shape, Rng &rng, double scale = 1.0) {
  Tensor t(shape);
  for (double &v : t.data()) v = rng.uniform(-scale, scale);
  return t;
}

ParameterSet zero_gru(size_t in, size_t hidden) {
  Rng rng(1);
  ParameterSet ps;
  add_gru_params(ps, "g", in, hidden, rng);
  for (auto &p : ps) p->value.fill(0.0);
  return ps;
}

}  // namespace

TEST_CASE("softmax of equal logits is uniform") {
  Tape t;
  Var y = softmax(t.constant(Tensor::vector({1, 1, 1})));
  for (double v : y.value().data()) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("softmax is shift invariant and rows sum to one") {
  Rng rng(3);
  Tape t;
  for (int trial = 0; trial < 50; ++trial) {
    Tensor x = random_tensor(Shape{4, 7}, rng, 20.0);
    Tensor shifted = x;
    for (double &v : shifted.data()) v += 123.25;
    Var a = softmax(t.constant(x));
    Var b = softmax(t.constant(shifted));
    for (size_t r = 0; r < 4; ++r) {
      double s = 0;
      for (size_t c = 0; c < 7; ++c) {
        s += a.value().at(r, c);
        CHECK(std::abs(a.value().at(r, c) - b.value().at(r, c)) < 1e-12);
      }
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("log_softmax agrees with log of softmax") {
  Tape t;
  Var x = t.constant(Tensor::vector({0.5, -2.0, 3.0}));
  Var a = log_softmax(x);
  Var b = softmax(x);
  for (size_t i = 0; i < 3; ++i) CHECK(a.value()[i] == doctest::Approx(std::log(b.value()[i])));
}

TEST_CASE("conv2d of ones with a ones filter sums the window") {
  Tape t;
  Var y = conv2d(t.constant(Tensor(Shape{1, 3, 3}, 1.0)), t.constant(Tensor(Shape{1, 1, 3, 3}, 1.0)),
                 t.constant(Tensor(Shape{1})));
  CHECK(y.shape() == Shape{1, 1, 1});
  CHECK(y.value().item() == 9.0);
}

TEST_CASE("maxpool2d picks window maxima") {
  Tape t;
  Tensor x(Shape{1, 4, 4}, std::vector<double>{1, 2, 0, 0,   //
                                               3, 4, 0, 9,   //
                                               0, 0, -1, -2,  //
                                               5, 0, -3, -4});
  Var y = maxpool2d(t.constant(x), 2, 2);
  CHECK(y.value().values() == std::vector<double>{4, 9, 5, -1});
}

TEST_CASE("matmul variants") {
  Tape t;
  Var a = t.constant(Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  Var b = t.constant(Tensor::matrix(3, 2, {1, 0, 0, 1, 1, 1}));
  CHECK(matmul(a, b).value().values() == std::vector<double>{4, 5, 10, 11});
  Var v = t.constant(Tensor::vector({1, 1, 1}));
  CHECK(matmul(a, v).value().values() == std::vector<double>{6, 15});
  CHECK(matmul(t.constant(Tensor::vector({1, 2})), a).value().values() ==
        std::vector<double>{9, 12, 15});
  CHECK(matmul(v, v).value().item() == 3.0);
  CHECK(matmul(v, v).shape().rank() == 0);
}

TEST_CASE("concat along both axes") {
  Tape t;
  Var a = t.constant(Tensor::matrix(2, 1, {1, 2}));
  Var b = t.constant(Tensor::matrix(2, 2, {3, 4, 5, 6}));
  CHECK(concat({a, b}, 1).value().values() == std::vector<double>{1, 3, 4, 2, 5, 6});
  CHECK(concat({b, b}, 0).shape() == Shape{4, 2});
}

TEST_CASE("shape errors name both shapes") {
  Tape t;
  Var a = t.constant(Tensor(Shape{2, 3}));
  Var b = t.constant(Tensor(Shape{4, 5}));
  try {
    matmul(a, b);
    FAIL("expected ShapeError");
  } catch (const ShapeError &e) {
    std::string msg = e.what();
    CHECK(msg.find("[2, 3]") != std::string::npos);
    CHECK(msg.find("[4, 5]") != std::string::npos);
  }
  CHECK_THROWS_AS(add(a, b), ShapeError);
  CHECK_THROWS_AS(mul(a, b), ShapeError);
  CHECK_THROWS_AS(concat({a, b}, 0), ShapeError);
  CHECK_THROWS_AS(Shape({1, 1, 1, 1, 1}), ShapeError);
  CHECK(t.size() == 2);
}

TEST_CASE("embedding lookup rejects out-of-range ids") {
  Tape t;
  Var table = t.constant(Tensor(Shape{3, 2}));
  std::vector<int> bad{0, 3};
  CHECK_THROWS_AS(embedding_lookup(table, bad), DataError);
  std::vector<int> neg{-1};
  CHECK_THROWS_AS(embedding_lookup(table, neg), DataError);
}

TEST_CASE("gradient of sum is all ones") {
  ParameterSet ps;
  Parameter &w = ps.add("w", Tensor(Shape{2, 3, 2}, 0.7));
  Tape t;
  t.backward(sum(t.parameter(w)));
  for (double g : w.grad.data()) CHECK(g == 1.0);
}

TEST_CASE("sigmoid derivative at zero") {
  ParameterSet ps;
  Parameter &x = ps.add("x", Tensor::scalar(0.0));
  Tape t;
  const double c = 3.5;
  t.backward(scale(sigmoid(t.parameter(x)), c));
  CHECK(x.grad.item() == doctest::Approx(0.25 * c).epsilon(1e-15));
}

TEST_CASE("backward accumulates and rejects non-scalar losses") {
  ParameterSet ps;
  Parameter &w = ps.add("w", Tensor::vector({1, 2}));
  for (int i = 0; i < 2; ++i) {
    Tape t;
    t.backward(sum(mul(t.parameter(w), t.parameter(w))));
  }
  CHECK(w.grad.values() == std::vector<double>{4, 8});
  Tape t;
  CHECK_THROWS_AS(t.backward(t.parameter(w)), UsageError);
}

TEST_CASE("ops do not mutate inputs") {
  Rng rng(5);
  Tensor x = random_tensor(Shape{3, 3}, rng);
  ParameterSet ps;
  Parameter &p = ps.add("p", x);
  Tape t;
  Var v = t.parameter(p);
  Var out = sum(softmax(tanh(add(matmul(v, v), v))));
  t.backward(out);
  CHECK(p.value == x);
}

TEST_CASE("layer gradient suite passes finite differences") {
  for (const auto &r : layer_gradient_suite()) {
    INFO(r.name << " worst " << r.worst_param << "[" << r.worst_index << "] rel "
                << r.max_rel_error);
    CHECK(r.checked > 0);
    CHECK(r.passed);
  }
}

TEST_CASE("gradient check detects a wrong gradient") {
  // A loss whose backward is deliberately scaled must fail.
  ParameterSet ps;
  ps.add("x", Tensor::vector({0.3, -0.4}));
  auto res = check_gradients("broken", ps, [](Tape &t, ParameterSet &p) {
    Var x = t.parameter(p.get("x"));
    if (t.grad_enabled()) return sum(scale(x, 2.0));
    return sum(x);
  });
  CHECK_FALSE(res.passed);
}

TEST_CASE("GRU with zero parameters halves the state") {
  ParameterSet ps = zero_gru(3, 4);
  Tape t;
  GruVars g = GruVars::bind(t, ps, "g");
  Tensor h0 = Tensor::vector({1, -2, 0.5, 4});
  Var h = gru_step(g, t.constant(Tensor::vector({7, -1, 2})), t.constant(h0));
  for (size_t i = 0; i < 4; ++i) CHECK(h.value()[i] == 0.5 * h0[i]);

  Var fixed = gru_step(g, t.constant(Tensor(Shape{3})), t.constant(Tensor(Shape{4})));
  for (double v : fixed.value().data()) CHECK(v == 0.0);

  Rng rng(9);
  Var hs = gru_sequence(g, t.constant(random_tensor(Shape{5, 3}, rng)), t.constant(h0));
  for (size_t i = 0; i < 4; ++i) CHECK(hs.value().at(4, i) == std::pow(0.5, 5) * h0[i]);
}

TEST_CASE("GRU sequence equals repeated steps and stays bounded") {
  Rng rng(11);
  ParameterSet ps;
  add_gru_params(ps, "g", 3, 4, rng);
  for (auto &p : ps) p->value = random_tensor(p->value.shape(), rng, 2.0);
  Tape t;
  GruVars g = GruVars::bind(t, ps, "g");
  Tensor xs = random_tensor(Shape{6, 3}, rng, 3.0);
  Tensor h0 = random_tensor(Shape{4}, rng, 2.0);
  Var seq = gru_sequence(g, t.constant(xs), t.constant(h0));
  Var h = t.constant(h0);
  for (size_t s = 0; s < 6; ++s) {
    double prev_norm = 0;
    for (double v : h.value().data()) prev_norm = std::max(prev_norm, std::abs(v));
    h = gru_step(g, row(t.constant(xs), s), h);
    for (size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(h.value()[i] - seq.value().at(s, i)) < 1e-14);
      CHECK(std::isfinite(h.value()[i]));
      CHECK(std::abs(h.value()[i]) <= std::max(prev_norm, 1.0) + 1e-15);
    }
  }
}

TEST_CASE("sgd step and zero gradients") {
  ParameterSet ps;
  Parameter &p = ps.add("p", Tensor::scalar(1.0));
  p.grad = Tensor::scalar(1.0);
  Optimizer sgd({Algorithm::kSgd, 0.1});
  sgd.step(ps);
  CHECK(p.value.item() == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(p.grad.item() == 0.0);
  for (Algorithm algo : {Algorithm::kSgd, Algorithm::kAdam}) {
    ParameterSet q;
    Parameter &v = q.add("v", Tensor::vector({0.5, -1.5}));
    Optimizer opt({algo, 0.01});
    opt.step(q);
    CHECK(v.value.values() == std::vector<double>{0.5, -1.5});
  }
}

TEST_CASE("adam first step moves by about lr regardless of gradient scale") {
  for (double g : {1.0, 1e-3, 0.25}) {
    ParameterSet ps;
    Parameter &p = ps.add("p", Tensor(Shape{3}, 2.0));
    p.grad.fill(g);
    OptimizerConfig cfg;
    cfg.lr = 0.01;
    cfg.clip_norm = 0;
    Optimizer adam(cfg);
    adam.step(ps);
    for (double v : p.value.data()) CHECK(2.0 - v == doctest::Approx(0.01).epsilon(1e-4));
  }
}

TEST_CASE("gradient clipping bounds the global norm") {
  ParameterSet ps;
  Parameter &a = ps.add("a", Tensor::vector({0, 0}));
  Parameter &b = ps.add("b", Tensor::scalar(0));
  a.grad = Tensor::vector({3, 0});
  b.grad = Tensor::scalar(4);
  Optimizer sgd({Algorithm::kSgd, 1.0, 0.9, 0.999, 1e-8, 1.0});
  CHECK(sgd.step(ps) == doctest::Approx(5.0));
  CHECK(a.value[0] == doctest::Approx(-0.6));
  CHECK(b.value.item() == doctest::Approx(-0.8));
}

TEST_CASE("non-finite gradient names the parameter") {
  ParameterSet ps;
  ps.add("fine", Tensor::scalar(1));
  Parameter &bad = ps.add("encoder.wz", Tensor::scalar(1));
  bad.grad = Tensor::scalar(std::numeric_limits<double>::quiet_NaN());
  Optimizer opt({Algorithm::kAdam, 0.1});
  try {
    opt.step(ps);
    FAIL("expected TrainingError");
  } catch (const TrainingError &e) {
    CHECK(std::string(e.what()).find("encoder.wz") != std::string::npos);
  }
  CHECK(bad.value.item() == 1.0);
}

TEST_CASE("parameter container round-trips bit-exactly") {
  Rng rng(21);
  ParameterSet ps;
  ps.add("emb", random_tensor(Shape{5, 3}, rng));
  ps.add("scalar", Tensor::scalar(-0.0));
  ps.add("conv", random_tensor(Shape{2, 2, 3, 3}, rng, 1e-300));
  nlohmann::json meta = {{"kind", "test"}};
  std::string bytes = ps.serialize(meta);
  auto [loaded, loaded_meta] = ParameterSet::deserialize(bytes);
  CHECK(loaded.same_values(ps));
  CHECK(loaded_meta == meta);
  CHECK(loaded.serialize(meta) == bytes);
  CHECK_THROWS_AS(ParameterSet::deserialize(bytes.substr(0, bytes.size() - 1)), ModelError);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(ParameterSet::deserialize(bad), ModelError);
}

TEST_CASE("rng is reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(1);
  for (int i = 0; i < 1000; ++i) {
    double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(c.below(7) < 7);
  }
}
