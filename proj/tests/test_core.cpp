// Copyright 2026 The NeAF Authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "neaf/core/adam.hpp"
#include "neaf/core/error.hpp"
#include "neaf/core/grad_check.hpp"
#include "neaf/core/schedule.hpp"
#include "neaf/core/tape.hpp"

using neaf::core::AdamState;
using neaf::core::Tape;
using neaf::core::Tensor;
using neaf::core::Var;

TEST_CASE("tensor shape and storage agree") {
  Tensor t({2, 3}, 1.5);
  CHECK(t.size() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK_THROWS_AS(Tensor({2, 2}, std::vector<double>{1, 2, 3}), neaf::ContractError);
  t[4] = std::nan("");
  CHECK_FALSE(t.all_finite());
}

TEST_CASE("backward of x squared") {
  Tape tape;
  Var x = tape.parameter(Tensor::scalar(3.0));
  Var y = tape.mul(x, x);
  CHECK(tape.backward(y).of(x).item() == doctest::Approx(6.0));
}

TEST_CASE("backward of sin at zero") {
  Tape tape;
  Var x = tape.parameter(Tensor::scalar(0.0));
  CHECK(tape.backward(tape.sin(x)).of(x).item() == doctest::Approx(1.0));
}

TEST_CASE("backward of a*b + a") {
  Tape tape;
  Var a = tape.parameter(Tensor::scalar(2.0));
  Var b = tape.parameter(Tensor::scalar(5.0));
  auto g = tape.backward(tape.add(tape.mul(a, b), a));
  CHECK(g.of(a).item() == doctest::Approx(6.0));
  CHECK(g.of(b).item() == doctest::Approx(2.0));
}

TEST_CASE("untouched leaves get zero gradient of their own shape") {
  Tape tape;
  Var a = tape.parameter(Tensor::scalar(2.0));
  Var unused = tape.parameter(Tensor({2, 2}, 1.0));
  auto g = tape.backward(tape.mul(a, a));
  Tensor z = g.of(unused);
  CHECK(z.shape() == Tensor::Shape{2, 2});
  CHECK(z == Tensor({2, 2}, 0.0));
  CHECK(g.find(unused) == nullptr);
}

TEST_CASE("backward rejects a non-scalar output") {
  Tape tape;
  Var x = tape.parameter(Tensor({3}, 1.0));
  CHECK_THROWS_AS(tape.backward(tape.sin(x)), neaf::ContractError);
}

TEST_CASE("row broadcast reduces gradients back to the row") {
  Tape tape;
  Var m = tape.parameter(Tensor({2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6}));
  Var r = tape.parameter(Tensor({3}, std::vector<double>{10, 20, 30}));
  Var s = tape.sum(tape.mul(tape.add(m, r), m));
  auto g = tape.backward(s);
  // d/dr sum((m + r) * m) = column sums of m
  Tensor gr = g.of(r);
  CHECK(gr[0] == doctest::Approx(5.0));
  CHECK(gr[1] == doctest::Approx(7.0));
  CHECK(gr[2] == doctest::Approx(9.0));
  // d/dm = 2m + r
  Tensor gm = g.of(m);
  CHECK(gm[0] == doctest::Approx(12.0));
  CHECK(gm[5] == doctest::Approx(42.0));
}

TEST_CASE("matmul gradient matches the transpose rule") {
  Tape tape;
  Var a = tape.parameter(Tensor({2, 2}, std::vector<double>{1, 2, 3, 4}));
  Var b = tape.parameter(Tensor({2, 1}, std::vector<double>{5, 6}));
  auto g = tape.backward(tape.sum(tape.matmul(a, b)));
  Tensor ga = g.of(a);
  CHECK(ga == Tensor({2, 2}, std::vector<double>{5, 6, 5, 6}));
  Tensor gb = g.of(b);
  CHECK(gb == Tensor({2, 1}, std::vector<double>{4, 6}));
}

TEST_CASE("every primitive agrees with finite differences") {
  neaf::core::ScalarFunction f = [](Tape& t, std::span<const Var> p) {
    Var x = p[0];  // [2, 3]
    Var y = p[1];  // [3]
    Var w = p[2];  // [3, 2]
    Var one = t.constant(Tensor::scalar(1.0));
    Var terms = t.add(t.mul(t.sin(x), t.cos(y)), t.exp(t.scale(x, 0.3)));
    terms = t.add(terms, t.log(t.add(t.mul(y, y), one)));
    terms = t.add(terms, t.reciprocal(t.add(t.abs(x), t.constant(Tensor::scalar(2.0)))));
    terms = t.add(terms, t.power(t.abs(y), 1.5));
    terms = t.sub(terms, t.max(x, y));
    return t.add(t.mean(terms), t.sum(t.sin(t.matmul(x, w))));
  };
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random = [&](Tensor::Shape shape) {
    Tensor out(shape);
    for (double& v : out.values()) v = u(rng);
    return out;
  };
  std::vector<Tensor> point{random({2, 3}), random({3}), random({3, 2})};
  auto r = neaf::core::grad_check(f, point);
  CHECK(r.checked == 15);
  CHECK(r.max_relative_error < 1e-6);
}

TEST_CASE("grad_check on a cubic") {
  neaf::core::ScalarFunction f = [](Tape& t, std::span<const Var> p) { return t.power(p[0], 3.0); };
  std::vector<Tensor> point{Tensor::scalar(2.0)};
  auto r = neaf::core::grad_check(f, point);
  CHECK(r.checked == 1);
  CHECK(r.max_relative_error < 1e-7);
}

TEST_CASE("grad_check on a high-frequency sine") {
  neaf::core::ScalarFunction f = [](Tape& t, std::span<const Var> p) { return t.sin(t.scale(p[0], 30.0)); };
  std::vector<Tensor> point{Tensor::scalar(0.1)};
  CHECK(neaf::core::grad_check(f, point).max_relative_error < 1e-5);
}

TEST_CASE("grad_check skips the kink of abs") {
  neaf::core::ScalarFunction f = [](Tape& t, std::span<const Var> p) { return t.abs(p[0]); };
  std::vector<Tensor> point{Tensor::scalar(0.0)};
  auto r = neaf::core::grad_check(f, point);
  CHECK(r.skipped == 1);
  CHECK(r.checked == 0);
  CHECK(r.all_skipped());
}

TEST_CASE("grad_check rejects a non-finite function value") {
  neaf::core::ScalarFunction f = [](Tape& t, std::span<const Var> p) { return t.log(p[0]); };
  std::vector<Tensor> point{Tensor::scalar(-1.0)};
  CHECK_THROWS_AS(neaf::core::grad_check(f, point), neaf::NumericError);
}

TEST_CASE("kinks of abs and max are counted and get zero slope for relu") {
  Tape tape;
  Var x = tape.parameter(Tensor::scalar(0.0));
  Var relu = tape.max(x, tape.constant(Tensor::scalar(0.0)));
  CHECK(tape.kink_hits() == 1);
  CHECK(tape.backward(relu).of(x).item() == 0.0);
}

TEST_CASE("replay reproduces recorded values and backward is repeatable") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  Tape tape;
  Tensor a({4, 3});
  Tensor b({3, 2});
  for (double& v : a.values()) v = n(rng);
  for (double& v : b.values()) v = n(rng);
  Var va = tape.parameter(a);
  Var vb = tape.parameter(b);
  Var h = tape.exp(tape.sin(tape.matmul(va, vb)));
  Var out = tape.mean(tape.mul(h, tape.cos(h)));
  CHECK(tape.replay_matches());
  auto g1 = tape.backward(out);
  auto g2 = tape.backward(out);
  CHECK(g1.of(va) == g2.of(va));
  CHECK(g1.of(vb) == g2.of(vb));
}

TEST_CASE("backward is linear in the output") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor xv({5});
    for (double& v : xv.values()) v = n(rng);
    double alpha = n(rng);
    double beta = n(rng);
    auto grads = [&](int which) {
      Tape t;
      Var x = t.parameter(xv);
      Var f = t.sum(t.mul(t.sin(x), t.exp(x)));
      Var g = t.mean(t.power(x, 2.0));
      Var out = which == 0 ? f : which == 1 ? g : t.add(t.scale(f, alpha), t.scale(g, beta));
      return t.backward(out).of(x);
    };
    Tensor gf = grads(0);
    Tensor gg = grads(1);
    Tensor gc = grads(2);
    for (std::size_t i = 0; i < 5; ++i) CHECK(gc[i] == doctest::Approx(alpha * gf[i] + beta * gg[i]).epsilon(1e-12));
  }
}

TEST_CASE("adam leaves parameters unchanged under zero gradient") {
  std::vector<Tensor> params{Tensor::vector({0.5, -1.0})};
  std::vector<Tensor> grads{Tensor::vector({0.0, 0.0})};
  AdamState state(params);
  neaf::core::adam_step(params, grads, state, 1e-4);
  CHECK(params[0] == Tensor::vector({0.5, -1.0}));
  CHECK(state.step == 1);
}

TEST_CASE("adam first step moves by lr against the gradient sign") {
  std::vector<Tensor> params{Tensor::scalar(1.0), Tensor::scalar(1.0)};
  std::vector<Tensor> grads{Tensor::scalar(1.0), Tensor::scalar(-0.5)};
  AdamState state(params);
  neaf::core::adam_step(params, grads, state, 1e-4);
  CHECK(params[0].item() - 1.0 == doctest::Approx(-1e-4 / (1.0 + 1e-8)).epsilon(1e-12));
  CHECK(params[1].item() - 1.0 == doctest::Approx(1e-4 / (1.0 + 2e-8)).epsilon(1e-12));
}

TEST_CASE("adam step counter increments and moments keep parameter shapes") {
  std::vector<Tensor> params{Tensor({2, 3}, 0.1)};
  std::vector<Tensor> grads{Tensor({2, 3}, 0.2)};
  AdamState state(params);
  for (int i = 1; i <= 3; ++i) {
    neaf::core::adam_step(params, grads, state, 1e-3);
    CHECK(state.step == static_cast<std::uint64_t>(i));
  }
  CHECK(state.first_moment[0].shape() == params[0].shape());
  CHECK(state.second_moment[0].shape() == params[0].shape());
}

TEST_CASE("adam rejects bad gradients without moving anything") {
  std::vector<Tensor> params{Tensor::scalar(1.0), Tensor::scalar(2.0)};
  AdamState state(params);
  std::vector<std::string> names{"w", "b"};
  std::vector<Tensor> nan_grads{Tensor::scalar(0.5), Tensor::scalar(std::nan(""))};
  try {
    neaf::core::adam_step(params, nan_grads, state, 1e-3, names);
    FAIL("expected an error");
  } catch (const neaf::NumericError& e) {
    CHECK(std::string(e.what()).find("parameter b") != std::string::npos);
  }
  CHECK(params[0].item() == 1.0);
  CHECK(state.step == 0);
  std::vector<Tensor> wrong{Tensor::vector({1.0, 2.0}), Tensor::scalar(0.0)};
  CHECK_THROWS_AS(neaf::core::adam_step(params, wrong, state, 1e-3), neaf::ContractError);
}

TEST_CASE("cosine schedule end points and midpoint") {
  using neaf::core::cosine_anneal;
  CHECK(cosine_anneal(0, 100, 1e-4) == doctest::Approx(1e-4));
  CHECK(cosine_anneal(100, 100, 1e-4) == doctest::Approx(0.0));
  CHECK(cosine_anneal(50, 100, 1e-4) == doctest::Approx(5e-5));
  CHECK(cosine_anneal(150, 100, 1e-4) == cosine_anneal(100, 100, 1e-4));
}

TEST_CASE("cosine schedule is non-increasing and symmetric") {
  using neaf::core::cosine_anneal;
  for (std::int64_t total : {1, 7, 300}) {
    double prev = cosine_anneal(0, total, 2.0);
    for (std::int64_t s = 0; s <= total; ++s) {
      double lr = cosine_anneal(s, total, 2.0);
      CHECK(lr <= prev);
      prev = lr;
      CHECK(lr + cosine_anneal(total - s, total, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
    }
  }
}
