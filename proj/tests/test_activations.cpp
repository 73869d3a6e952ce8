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
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "neaf/activations.hpp"
#include "neaf/core/error.hpp"
#include "neaf/core/tape.hpp"

using namespace neaf::activations;
using neaf::core::Tape;
using neaf::core::Tensor;
using neaf::core::Var;

namespace {

ActivationSpec spec_of(ActivationKind k) { return ActivationSpec::defaults(k); }

// Formulas written out independently of the library kernels, default parameters.
double reference(ActivationKind k, double x) {
  switch (k) {
    case ActivationKind::kGaborWavelet: return std::cos(x) * std::exp(-x * x);
    case ActivationKind::kQuadratic: return 1.0 / (1.0 + x * x);
    case ActivationKind::kMultiQuadratic: return 1.0 / std::sqrt(1.0 + x * x);
    case ActivationKind::kExpSin: return std::exp(-std::sin(x));
    case ActivationKind::kSigmoid: return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::kSoftplus: return std::log(1.0 + std::exp(x));
    case ActivationKind::kTanh: return std::tanh(x);
    case ActivationKind::kElu: return x > 0 ? x : std::exp(x) - 1.0;
    case ActivationKind::kSilu: return x / (1.0 + std::exp(-x));
    case ActivationKind::kPrelu: return x > 0 ? x : 0.25 * x;
    case ActivationKind::kRelu: return x > 0 ? x : 0.0;
    case ActivationKind::kGaussian: return std::exp(-x * x / (2 * 0.01));
    case ActivationKind::kLaplacian: return std::exp(-std::abs(x) / 0.1);
    case ActivationKind::kSuperGaussian: return std::pow(std::exp(-x * x / (2 * 0.01)), 2.0);
    case ActivationKind::kSine: return std::sin(30 * x);
    case ActivationKind::kIncodeSine: return std::sin(30 * x);
  }
  return 0.0;
}

double sample_input(ActivationKind k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> wide(-2.0, 2.0);
  std::uniform_real_distribution<double> narrow(-0.3, 0.3);
  double x = 0.0;
  switch (k) {
    case ActivationKind::kGaussian:
    case ActivationKind::kLaplacian:
    case ActivationKind::kSuperGaussian:
    case ActivationKind::kSine:
    case ActivationKind::kIncodeSine: x = narrow(rng); break;
    default: x = wide(rng);
  }
  // keep clear of the kinks at zero
  if (std::abs(x) < 1e-3) x = 1e-3;
  return x;
}

}  // namespace

TEST_CASE("spot values") {
  CHECK(apply(spec_of(ActivationKind::kRelu), -2.0) == 0.0);
  CHECK(apply(spec_of(ActivationKind::kGaussian), 0.0) == 1.0);
  CHECK(apply(spec_of(ActivationKind::kSine), std::numbers::pi / 60) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(apply(spec_of(ActivationKind::kSilu), 0.0) == 0.0);
  CHECK(apply(spec_of(ActivationKind::kSigmoid), 0.0) == 0.5);
  CHECK(apply(spec_of(ActivationKind::kLaplacian), 0.1) == doctest::Approx(0.36788).epsilon(1e-5));
}

TEST_CASE("spot derivatives") {
  CHECK(apply_grad(spec_of(ActivationKind::kSine), 0.0).dx == doctest::Approx(30.0));
  CHECK(apply_grad(spec_of(ActivationKind::kRelu), 1.0).dx == 1.0);
  CHECK(apply_grad(spec_of(ActivationKind::kRelu), 0.0).dx == 0.0);
  CHECK(apply_grad(spec_of(ActivationKind::kPrelu), 0.0).dx == 0.0);
  CHECK(apply_grad(spec_of(ActivationKind::kElu), 0.0).dx == doctest::Approx(1.0));
  for (double x : {-3.0, 0.0, 0.7}) CHECK(apply_grad(spec_of(ActivationKind::kIncodeSine), x).dtheta[3] == 1.0);
}

TEST_CASE("every kind matches its reference formula") {
  std::mt19937_64 rng(21);
  for (ActivationKind k : kAllActivations) {
    CAPTURE(to_string(k));
    for (int i = 0; i < 50; ++i) {
      double x = sample_input(k, rng);
      CHECK(apply(spec_of(k), x) == doctest::Approx(reference(k, x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic derivatives match central differences") {
  std::mt19937_64 rng(22);
  const double h = 1e-6;
  for (ActivationKind k : kAllActivations) {
    CAPTURE(to_string(k));
    ActivationSpec s = spec_of(k);
    for (int i = 0; i < 100; ++i) {
      double x = sample_input(k, rng);
      double fd = (apply(s, x + h) - apply(s, x - h)) / (2 * h);
      double an = apply_grad(s, x).dx;
      CHECK(std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-9}) < 1e-5);
      auto names = learnable_names(k);
      for (std::size_t j = 0; j < names.size(); ++j) {
        ActivationSpec up = s;
        ActivationSpec dn = s;
        up.learnable[std::string(names[j])] += h;
        dn.learnable[std::string(names[j])] -= h;
        double fdt = (apply(up, x) - apply(dn, x)) / (2 * h);
        double ant = apply_grad(s, x).dtheta[j];
        CHECK(std::abs(ant - fdt) <= 1e-5 * std::max({std::abs(ant), std::abs(fdt), 1e-4}));
      }
    }
  }
}

TEST_CASE("tape recording agrees with scalar evaluation") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (ActivationKind k : kAllActivations) {
    CAPTURE(to_string(k));
    ActivationSpec s = spec_of(k);
    for (auto name : learnable_names(k)) s.learnable[std::string(name)] += 0.1;
    Tensor x({37, 3});
    for (double& v : x.values()) v = u(rng);
    Tape tape;
    Var vx = tape.parameter(x);
    std::vector<Var> learn;
    for (auto name : learnable_names(k)) learn.push_back(tape.parameter(Tensor::scalar(s.learnable.at(std::string(name)))));
    Var y = record(tape, s, vx, learn);
    Var total = tape.sum(y);
    auto g = tape.backward(total);
    Tensor gx = g.of(vx);
    std::vector<double> theta_sum(learn.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(tape.value(y)[i] == doctest::Approx(apply(s, x[i])).epsilon(1e-13));
      auto ag = apply_grad(s, x[i]);
      CHECK(gx[i] == doctest::Approx(ag.dx).epsilon(1e-12));
      for (std::size_t j = 0; j < learn.size(); ++j) theta_sum[j] += ag.dtheta[j];
    }
    for (std::size_t j = 0; j < learn.size(); ++j) CHECK(g.of(learn[j]).item() == doctest::Approx(theta_sum[j]).epsilon(1e-10));
  }
}

TEST_CASE("bounded activations stay bounded") {
  std::mt19937_64 rng(24);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    double x = n(rng);
    CHECK(std::abs(apply(spec_of(ActivationKind::kSine), x)) <= 1.0);
    double s = apply(spec_of(ActivationKind::kSigmoid), x * 0.2);
    CHECK(s > 0.0);
    CHECK(s < 1.0);
    double gsn = apply(spec_of(ActivationKind::kGaussian), x * 0.02);
    CHECK(gsn > 0.0);
    CHECK(gsn <= 1.0);
    CHECK(std::abs(apply(spec_of(ActivationKind::kTanh), x * 0.2)) < 1.0);
  }
}

TEST_CASE("incode sine at its initial values is plain sine") {
  std::mt19937_64 rng(25);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    double x = n(rng);
    CHECK(apply(spec_of(ActivationKind::kIncodeSine), x) == apply(spec_of(ActivationKind::kSine), x));
  }
}

TEST_CASE("super gaussian with b = 1 is the gaussian") {
  ActivationSpec sg = spec_of(ActivationKind::kSuperGaussian);
  sg.hyper["b"] = 1.0;
  std::mt19937_64 rng(26);
  std::normal_distribution<double> n(0.0, 0.2);
  for (int i = 0; i < 500; ++i) {
    double x = n(rng);
    CHECK(apply(sg, x) == apply(spec_of(ActivationKind::kGaussian), x));
  }
}

TEST_CASE("defaults and learnable classification") {
  CHECK(spec_of(ActivationKind::kGaussian).hyper.at("a") == 0.1);
  CHECK(spec_of(ActivationKind::kSuperGaussian).hyper.at("b") == 2.0);
  CHECK(spec_of(ActivationKind::kSine).omega() == 30.0);
  CHECK(spec_of(ActivationKind::kPrelu).learnable.at("a") == 0.25);
  CHECK(spec_of(ActivationKind::kIncodeSine).learnable.size() == 4);
  CHECK(spec_of(ActivationKind::kGaborWavelet).learnable.size() == 2);
  CHECK(spec_of(ActivationKind::kRelu).hyper.empty());
  for (ActivationKind k : kAllActivations) {
    CHECK_NOTHROW(spec_of(k).validate());
    CHECK(activation_from_string(to_string(k)) == k);
    ActivationSpec back = activation_from_json(to_json(spec_of(k)));
    CHECK(back.kind == k);
    CHECK(back.hyper == spec_of(k).hyper);
    CHECK(back.learnable == spec_of(k).learnable);
  }
}

TEST_CASE("malformed specs are rejected") {
  CHECK_THROWS_AS(activation_from_string("swish"), neaf::ContractError);
  ActivationSpec missing = spec_of(ActivationKind::kGaussian);
  missing.hyper.clear();
  CHECK_THROWS_AS(missing.validate(), neaf::ContractError);
  ActivationSpec misplaced = spec_of(ActivationKind::kPrelu);
  misplaced.hyper = misplaced.learnable;
  misplaced.learnable.clear();
  CHECK_THROWS_AS(misplaced.validate(), neaf::ContractError);
}
