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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "neaf/audio/dataset.hpp"
#include "neaf/audio/synth.hpp"
#include "neaf/core/error.hpp"
#include "neaf/models/fourier_kan.hpp"
#include "neaf/models/mlp.hpp"
#include "neaf/models/model.hpp"
#include "neaf/trainer.hpp"

using namespace neaf;
using namespace neaf::trainer;
using activations::ActivationKind;
using activations::ActivationSpec;

namespace {

models::MLPConfig tiny_mlp(ActivationKind kind = ActivationKind::kTanh) {
  models::MLPConfig m;
  m.widths = {1, 8, 8, 1};
  m.activation = ActivationSpec::defaults(kind);
  m.init = models::default_init(kind);
  return m;
}

audio::AudioClip tone_clip(std::uint32_t rate, double duration, double freq, double amp = 0.5) {
  return audio::synth_signal({rate, duration, {{amp, freq, 0.0}}});
}

}  // namespace

TEST_CASE("a constant target is learned") {
  audio::AudioClip clip{std::vector<double>(64, 0.3), 64};
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.lr0 = 1e-2;
  cfg.batch_size = 16;
  auto r = fit(tiny_mlp(), audio::to_dataset(clip), cfg);
  CHECK(r.loss_history.size() == 200);
  CHECK(r.loss_history.back() < 1e-4);
  CHECK(r.loss_history.back() < r.loss_history.front());
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  auto spec = models::ModelSpec{tiny_mlp()};
  auto clip = tone_clip(100, 1.0, 3.0);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.lr0 = 0.0;
  cfg.batch_size = 32;
  auto initial = models::init_params(spec, cfg.seed);
  auto r = fit(spec, initial, audio::to_dataset(clip), cfg);
  CHECK(r.params == initial);
  CHECK(r.loss_history.size() == 1);
}

TEST_CASE("training is deterministic for a fixed seed") {
  auto spec = models::ModelSpec{models::FourierKANConfig{{1, 4, 1}, {16, 3}}};
  auto data = audio::to_dataset(tone_clip(400, 1.0, 5.0));
  TrainConfig cfg;
  cfg.epochs = 15;
  cfg.lr0 = 1e-2;
  cfg.batch_size = 64;
  cfg.seed = 4;
  auto a = fit(spec, data, cfg);
  auto b = fit(spec, data, cfg);
  CHECK(a.loss_history == b.loss_history);
  CHECK(a.params == b.params);
  cfg.seed = 5;
  CHECK(fit(spec, data, cfg).loss_history != a.loss_history);
}

TEST_CASE("chunked gradient accumulation does not change the update") {
  auto spec = models::ModelSpec{tiny_mlp(ActivationKind::kSine)};
  auto data = audio::to_dataset(tone_clip(300, 1.0, 2.0));
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.lr0 = 1e-3;
  cfg.batch_size = 100;
  auto whole = fit(spec, data, cfg);
  cfg.chunk_rows = 7;
  auto chunked = fit(spec, data, cfg);
  for (std::size_t i = 0; i < whole.loss_history.size(); ++i)
    CHECK(chunked.loss_history[i] == doctest::Approx(whole.loss_history[i]).epsilon(1e-10));
}

TEST_CASE("progress callback and epoch statistics") {
  auto data = audio::to_dataset(tone_clip(200, 1.0, 2.0));
  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.lr0 = 1e-3;
  cfg.batch_size = 50;
  cfg.eval_every = 4;
  std::vector<std::int64_t> seen;
  auto r = fit(models::ModelSpec{tiny_mlp()}, data, cfg, [&](const EpochStats& s) { seen.push_back(s.epoch); });
  CHECK(seen == std::vector<std::int64_t>{4, 8, 10});
  REQUIRE(r.epochs.size() == 10);
  CHECK(r.epochs.back().lr < 1e-5);
  CHECK(r.epochs.front().lr > r.epochs.back().lr);
  CHECK(r.epochs[3].mean_loss == r.loss_history[3]);

  cfg.schedule = Schedule::kConstant;
  auto c = fit(models::ModelSpec{tiny_mlp()}, data, cfg);
  CHECK(c.epochs.back().lr == 1e-3);

  auto path = std::filesystem::temp_directory_path() / "neaf_test_loss.csv";
  write_loss_csv(r.epochs, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "epoch,mean_loss,lr");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 10);
}

TEST_CASE("divergence aborts with context") {
  models::MLPConfig m = tiny_mlp(ActivationKind::kRelu);
  auto data = audio::to_dataset(tone_clip(100, 1.0, 2.0));
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 10;
  cfg.divergence_threshold = 1e6;
  auto p = models::init_params(m, 0);
  p.at(models::mlp_bias_name(2))[0] = 1e4;
  try {
    fit(m, p, data, cfg);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(std::string(e.what()).find("epoch 1, batch 1") != std::string::npos);
  }
  p.at(models::mlp_bias_name(2))[0] = std::nan("");
  CHECK_THROWS_AS(fit(m, p, data, cfg), NumericError);
}

TEST_CASE("invalid training configs are rejected") {
  auto data = audio::to_dataset(tone_clip(100, 1.0, 2.0));
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(fit(models::ModelSpec{tiny_mlp()}, data, cfg), ContractError);
  CHECK_THROWS_AS(train_from_json({{"batch_size", 0}}), ContractError);
  CHECK_THROWS_AS(train_from_json({{"schedule", "step"}}), ContractError);
  TrainConfig back = train_from_json(to_json(TrainConfig{.epochs = 7, .lr0 = 3e-3, .seed = 2}));
  CHECK(back.epochs == 7);
  CHECK(back.lr0 == 3e-3);
  CHECK(back.seed == 2);
}

TEST_CASE("evaluate examples") {
  models::FourierKANConfig one{{1, 1}, {1}};
  auto p = models::init_params(one, 0);
  for (auto& t : p.tensors()) t.value.fill(0.0);
  // unit-norm reference against an all-zero model
  std::vector<double> y(4096, 0.0);
  y[100] = 0.6;
  y[3000] = -0.8;
  audio::AudioClip clip{y, 8000};
  auto r = evaluate(p, one, clip);
  CHECK(r.snr_db == doctest::Approx(0.0));
  CHECK(r.param_count == 3);

  // a model that reproduces the clip exactly: f(t) = 0.5 sin(t) sampled on its own grid
  auto q = p;
  q.at(models::fourier_kan_coef_name(0))[1] = 0.5;
  auto grid = audio::unit_grid(4096);
  std::vector<double> exact(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) exact[i] = models::predict(one, q, grid[i]);
  auto perfect = evaluate(q, one, audio::AudioClip{exact, 8000});
  CHECK(perfect.snr_db == metrics::snr_infinity());
  CHECK(perfect.lsd == 0.0);

  auto back = metrics::report_from_json(nlohmann::json::parse(metrics::to_json(r).dump()));
  CHECK(back.snr_db == r.snr_db);
  CHECK(back.lsd == r.lsd);
}

TEST_CASE("render grid consistency") {
  auto spec = models::ModelSpec{models::FourierKANConfig{{1, 3, 1}, {8, 2}}};
  auto p = models::init_params(spec, 3);
  auto a = render(p, spec, 1000, 0.5);
  auto b = render(p, spec, 2000, 0.5);
  CHECK(a.samples.size() == 500);
  CHECK(b.samples.size() == 1000);
  CHECK(a.sample_rate == 1000);
  // 4x grid over [0, 1] with 4n - 3 points shares every point of the n grid
  auto c = render(p, spec, 1, 4.0 * 500 - 3);
  for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(c.samples[4 * i] == a.samples[i]);

  auto clip = tone_clip(1000, 0.5, 40.0);
  auto same = render(p, spec, clip.sample_rate, clip.duration());
  CHECK(same.samples == models::predict(spec, p, audio::to_dataset(clip).coords));
}

TEST_CASE("a fitted tone keeps its frequency when rendered at four times the rate") {
  auto clip = tone_clip(1000, 0.5, 100.0, 0.8);
  auto spec = models::ModelSpec{models::FourierKANConfig{{1, 8, 1}, {128, 3}}};
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.lr0 = 1e-2;
  cfg.batch_size = 100;
  auto r = fit(spec, audio::to_dataset(clip), cfg);
  CHECK(r.loss_history.back() < r.loss_history.front());
  auto up = render(r.params, spec, 4000, 0.5);
  REQUIRE(up.samples.size() == 2000);
  // bin k of a 2000-point DFT at 4 kHz is 2k Hz
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t k = 1; k < 1000; ++k) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < up.samples.size(); ++i)
      s += up.samples[i] * std::polar(1.0, -2 * std::numbers::pi * static_cast<double>(k * i % 2000) / 2000.0);
    if (std::norm(s) > best_power) {
      best_power = std::norm(s);
      best = k;
    }
  }
  CHECK(2 * best == 100);
}
