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
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "neaf/core/error.hpp"
#include "neaf/metrics.hpp"
#include "oracles.hpp"

using namespace neaf::metrics;
using neaf::oracle::naive_lsd;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed, double sd = 0.3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, sd);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("snr examples") {
  std::vector<double> y{3, 4};
  CHECK(snr(y, y) == snr_infinity());
  CHECK(std::isinf(snr_infinity()));
  CHECK(snr(std::vector<double>{2, 4}, y) == doctest::Approx(20 * std::log10(25.0)).epsilon(1e-12));
  CHECK(snr(std::vector<double>{2, 4}, y) == doctest::Approx(27.9588).epsilon(1e-5));
  CHECK(snr(std::vector<double>{0, 0}, std::vector<double>{0.6, 0.8}) == doctest::Approx(0.0));
  CHECK(snr(std::vector<double>{2, 4}, y, SnrConvention::kPower) == doctest::Approx(10 * std::log10(25.0)));
}

TEST_CASE("snr errors") {
  CHECK_THROWS_AS(snr(std::vector<double>{1, 2}, std::vector<double>{0, 0}), neaf::ContractError);
  CHECK_THROWS_AS(snr(std::vector<double>{1}, std::vector<double>{1, 2}), neaf::ContractError);
  CHECK_THROWS_AS(snr(std::vector<double>{}, std::vector<double>{}), neaf::ContractError);
}

TEST_CASE("halving the squared error adds 20 log10 2") {
  auto y = noise(1000, 1);
  auto e = noise(1000, 2, 0.05);
  std::vector<double> y1(y.size());
  std::vector<double> y2(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y1[i] = y[i] + e[i];
    y2[i] = y[i] + e[i] / std::sqrt(2.0);
  }
  CHECK(snr(y2, y) - snr(y1, y) == doctest::Approx(20 * std::log10(2.0)).epsilon(1e-9));
}

TEST_CASE("snr is invariant under a joint permutation") {
  auto y = noise(64, 3);
  auto yh = noise(64, 4);
  std::vector<std::size_t> perm(64);
  for (std::size_t i = 0; i < 64; ++i) perm[i] = (i * 37) % 64;
  std::vector<double> py(64);
  std::vector<double> pyh(64);
  for (std::size_t i = 0; i < 64; ++i) {
    py[i] = y[perm[i]];
    pyh[i] = yh[perm[i]];
  }
  CHECK(snr(pyh, py) == doctest::Approx(snr(yh, y)).epsilon(1e-12));
}

TEST_CASE("hann window is periodic") {
  auto w = hann_window(8);
  CHECK(w[0] == 0.0);
  CHECK(w[4] == doctest::Approx(1.0));
  CHECK(w[2] == doctest::Approx(0.5));
  CHECK(w[6] == doctest::Approx(0.5));
}

TEST_CASE("stft shape and special signals") {
  std::vector<double> c(4096, 0.4);
  auto x = stft_log_power(c);
  CHECK(x.shape() == neaf::core::Tensor::Shape{5, 1025});
  for (std::size_t l = 0; l < x.rows(); ++l) {
    for (std::size_t k = 1; k < x.cols(); ++k) CHECK(x.at(l, k) < x.at(l, 0));
    // the periodic Hann leaks a constant into bin 1 only
    for (std::size_t k = 2; k < x.cols(); ++k) CHECK(x.at(l, k) < x.at(l, 0) - 20.0);
  }

  std::vector<double> tone(6000);
  for (std::size_t i = 0; i < tone.size(); ++i) tone[i] = 0.5 * std::sin(2 * std::numbers::pi * 100.0 * i / 2048.0);
  auto xt = stft_log_power(tone);
  for (std::size_t l = 0; l < xt.rows(); ++l) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < xt.cols(); ++k)
      if (xt.at(l, k) > xt.at(l, best)) best = k;
    CHECK(best == 100);
  }

  auto xz = stft_log_power(std::vector<double>(2048, 0.0));
  CHECK(xz.rows() == 1);
  for (double v : xz.values()) CHECK(v == doctest::Approx(std::log(1e-10)));

  CHECK_THROWS_AS(stft_log_power(std::vector<double>(2047, 0.1)), neaf::ContractError);
}

TEST_CASE("log base ten is a constant rescale") {
  auto y = noise(4096, 5);
  MetricSettings ten;
  ten.log_base = LogBase::kTen;
  auto xe = stft_log_power(y);
  auto x10 = stft_log_power(y, ten);
  for (std::size_t i = 0; i < xe.size(); i += 97) CHECK(x10[i] == doctest::Approx(xe[i] / std::log(10.0)));
}

TEST_CASE("lsd identities") {
  auto y = noise(8192, 6);
  auto z = noise(8192, 7);
  CHECK(lsd(y, y) == 0.0);
  CHECK(lsd(y, z) > 0.0);
  CHECK(lsd(y, z) == doctest::Approx(lsd(z, y)).epsilon(1e-14));
  for (double alpha : {0.5, 2.0, 3.7}) {
    std::vector<double> s(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) s[i] = alpha * y[i];
    CHECK(lsd(s, y) == doctest::Approx(2 * std::abs(std::log(alpha))).epsilon(1e-6));
  }
  CHECK_THROWS_AS(lsd(std::vector<double>(4096, 0.1), std::vector<double>(4097, 0.1)), neaf::ContractError);
}

TEST_CASE("lsd matches a naive DFT reference") {
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    auto a = noise(4096, seed);
    auto b = noise(4096, seed + 100);
    CHECK(std::abs(lsd(a, b) - naive_lsd(a, b)) < 1e-9);
  }
}

TEST_CASE("lsd is non-negative on random pairs") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    auto a = noise(2048 + 512 * (i % 3), rng());
    auto b = noise(a.size(), rng());
    CHECK(lsd(a, b) >= 0.0);
  }
}

TEST_CASE("report JSON round trip, including infinity") {
  MetricsReport r;
  r.snr_db = snr_infinity();
  r.lsd = 0.125;
  r.param_count = 42;
  r.train_seconds = 1.5;
  r.final_loss = 3e-7;
  r.loss_history = {1.0, 0.5, 3e-7};
  r.settings.snr_convention = SnrConvention::kPower;
  r.settings.log_base = LogBase::kTen;
  auto doc = to_json(r);
  CHECK(doc["snr_db"] == "inf");
  MetricsReport back = report_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.snr_db == r.snr_db);
  CHECK(back.lsd == r.lsd);
  CHECK(back.param_count == 42);
  CHECK(back.loss_history == r.loss_history);
  CHECK(back.settings.snr_convention == SnrConvention::kPower);
  CHECK(back.settings.log_base == LogBase::kTen);
  CHECK(back.settings.hop == 512);
  CHECK(format_snr(snr_infinity()) == "inf");
  CHECK(format_snr(12.345678, 3) == "12.346");
}
