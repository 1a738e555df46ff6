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

#include "docbot/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "docbot/nn/layers.hpp"
#include "docbot/rng.hpp"

namespace docbot::nn {

GradCheckResult check_gradients(const std::string &name, ParameterSet &params,
                                const LossFn &loss, const GradCheckOptions &opts) {
  GradCheckResult result;
  result.name = name;
  params.zero_grad();
  {
    Tape tape;
    tape.backward(loss(tape, params));
  }
  std::vector<Tensor> analytic;
  for (const auto &p : params) analytic.push_back(p->grad);
  params.zero_grad();

  auto evaluate = [&]() {
    Tape tape(false);
    return loss(tape, params).value().item();
  };

  Rng rng(opts.seed);
  for (size_t k = 0; k < params.size(); ++k) {
    Parameter &p = params[k];
    std::vector<size_t> positions(p.value.size());
    std::iota(positions.begin(), positions.end(), size_t{0});
    if (opts.max_per_param > 0 && positions.size() > opts.max_per_param) {
      rng.shuffle(std::span<size_t>(positions));
      positions.resize(opts.max_per_param);
      std::sort(positions.begin(), positions.end());
    }
    for (size_t i : positions) {
      const double original = p.value[i];
      p.value[i] = original + opts.eps;
      const double plus = evaluate();
      p.value[i] = original - opts.eps;
      const double minus = evaluate();
      p.value[i] = original;
      const double numeric = (plus - minus) / (2 * opts.eps);
      const double a = analytic[k][i];
      const double rel = std::abs(a - numeric) / std::max(1e-8, std::abs(a) + std::abs(numeric));
      ++result.checked;
      if (!(rel <= result.max_rel_error)) {
        result.max_rel_error = std::isnan(rel) ? INFINITY : rel;
        result.worst_param = p.name;
        result.worst_index = i;
      }
    }
  }
  result.passed = result.max_rel_error <= opts.tolerance;
  return result;
}

namespace {

Tensor random_tensor(Shape shape, Rng &rng, double scale = 1.0) {
  Tensor t(shape);
  for (double &v : t.data()) v = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

std::vector<GradCheckResult> layer_gradient_suite(uint64_t seed) {
  std::vector<GradCheckResult> results;
  constexpr size_t kIn = 3, kHidden = 4, kSteps = 4;

  {
    Rng rng(seed);
    ParameterSet ps;
    add_gru_params(ps, "gru", kIn, kHidden, rng);
    for (const char *b : {"gru.bz", "gru.br", "gru.bh"}) {
      ps.get(b).value = random_tensor(Shape{kHidden}, rng, 0.5);
    }
    ps.add("x", random_tensor(Shape{kIn}, rng));
    ps.add("h", random_tensor(Shape{kHidden}, rng));
    Tensor w = random_tensor(Shape{kHidden}, rng);
    results.push_back(check_gradients("gru_step", ps, [&](Tape &t, ParameterSet &p) {
      GruVars g = GruVars::bind(t, p, "gru");
      Var h = gru_step(g, t.parameter(p.get("x")), t.parameter(p.get("h")));
      return sum(mul(h, t.constant(w)));
    }));
  }
  {
    Rng rng(seed + 1);
    ParameterSet ps;
    add_gru_params(ps, "gru", kIn, kHidden, rng);
    ps.add("xs", random_tensor(Shape{kSteps, kIn}, rng));
    ps.add("h0", random_tensor(Shape{kHidden}, rng, 0.5));
    Tensor w = random_tensor(Shape{kSteps, kHidden}, rng);
    results.push_back(check_gradients("gru_sequence", ps, [&](Tape &t, ParameterSet &p) {
      GruVars g = GruVars::bind(t, p, "gru");
      Var hs = gru_sequence(g, t.parameter(p.get("xs")), t.parameter(p.get("h0")));
      return sum(mul(hs, t.constant(w)));
    }));
  }
  {
    Rng rng(seed + 2);
    ParameterSet ps;
    ps.add("h", random_tensor(Shape{kSteps, kHidden}, rng));
    ps.add("w1", xavier_uniform(kHidden, kHidden, rng));
    ps.add("w2", xavier_uniform(kHidden, kHidden, rng));
    ps.add("v", random_tensor(Shape{kHidden}, rng));
    ps.add("wg", xavier_uniform(2 * kHidden, 2 * kHidden, rng));
    Tensor w = random_tensor(Shape{2 * kHidden}, rng);
    results.push_back(check_gradients("attention_block", ps, [&](Tape &t, ParameterSet &p) {
      Var h = t.parameter(p.get("h"));
      Var keys = matmul(h, t.parameter(p.get("w1")));
      Var queries = matmul(h, t.parameter(p.get("w2")));
      Var v = t.parameter(p.get("v"));
      Var wg = t.parameter(p.get("wg"));
      Var total = t.constant(Tensor(Shape{}));
      for (size_t i = 0; i < kSteps; ++i) {
        Var c = additive_attention(keys, row(queries, i), v, h);
        Var hc = concat({row(h, i), c}, 0);
        Var x = mul(sigmoid(matmul(hc, wg)), hc);
        total = add(total, sum(mul(x, t.constant(w))));
      }
      return total;
    }));
  }
  {
    Rng rng(seed + 3);
    ParameterSet ps;
    ps.add("image", random_tensor(Shape{2, 7, 7}, rng));
    ps.add("filters", random_tensor(Shape{3, 2, 3, 3}, rng, 0.5));
    ps.add("bias", random_tensor(Shape{3}, rng, 0.1));
    ps.add("dense", random_tensor(Shape{12, 3}, rng, 0.5));
    ps.add("dense_b", random_tensor(Shape{3}, rng, 0.1));
    results.push_back(check_gradients("conv_pool_stack", ps, [&](Tape &t, ParameterSet &p) {
      Var y = relu(conv2d(t.parameter(p.get("image")), t.parameter(p.get("filters")),
                          t.parameter(p.get("bias"))));
      Var pooled = maxpool2d(y, 2, 2);
      Var flat = reshape(pooled, Shape{12});
      Var out = tanh(linear(flat, t.parameter(p.get("dense")), t.parameter(p.get("dense_b"))));
      return sum(mul(out, t.constant(Tensor::vector({0.3, -0.7, 1.1}))));
    }));
  }
  {
    Rng rng(seed + 4);
    ParameterSet ps;
    ps.add("a", random_tensor(Shape{3, 4}, rng));
    ps.add("b", random_tensor(Shape{4, 2}, rng));
    ps.add("c", random_tensor(Shape{3, 2}, rng));
    Rng probe_rng(seed + 5);
    Tensor w1 = random_tensor(Shape{3, 2}, probe_rng);
    Tensor w2 = random_tensor(Shape{7, 2}, probe_rng);
    Tensor w3 = random_tensor(Shape{2, 3}, probe_rng);
    results.push_back(check_gradients("softmax_family", ps, [&](Tape &t, ParameterSet &p) {
      Var a = t.parameter(p.get("a"));
      Var ab = matmul(a, t.parameter(p.get("b")));
      Var c = t.parameter(p.get("c"));
      Var s = softmax(add(ab, c));
      Var l = log_softmax(sub(ab, c));
      Var joined = concat({s, pad2d(l, 4, 2)}, 0);
      Var stacked = stack(std::vector<Var>{mean(s), sum(l)});
      return add(add(sum(mul(add(s, l), t.constant(w1))), sum(mul(transpose(s), t.constant(w3)))),
                 add(sum(mul(joined, t.constant(w2))), sum(scale(one_minus(stacked), 0.5))));
    }));
  }
  {
    Rng rng(seed + 6);
    ParameterSet ps;
    ps.add("table", random_tensor(Shape{6, 3}, rng));
    ps.add("w", random_tensor(Shape{3}, rng));
    const std::vector<int> ids{4, 1, 4, 0};
    results.push_back(check_gradients("embedding_losses", ps, [&](Tape &t, ParameterSet &p) {
      Var e = embedding_lookup(t.parameter(p.get("table")), ids);
      Var logits = matmul(e, t.parameter(p.get("w")));
      Var ce = cross_entropy(logits, 2);
      Var bce = bce_with_logits(sum(logits), 1.0);
      return add(add(ce, bce), bce_with_logits(mean(e), 0.0));
    }));
  }
  return results;
}

}  // namespace docbot::nn
