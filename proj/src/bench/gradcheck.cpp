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

#include "neaf/bench/gradcheck.hpp"

#include <cmath>
#include <random>

#include "neaf/activations.hpp"
#include "neaf/encodings.hpp"
#include "neaf/models/model.hpp"

namespace neaf::bench {

namespace {

using core::Tape;
using core::Tensor;
using core::Var;

Tensor random_column(std::size_t n, double lo, double hi, double keep_out, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor t = Tensor::matrix(n, 1);
  for (double& v : t.values()) {
    do {
      v = dist(rng);
    } while (std::abs(v) < keep_out);
  }
  return t;
}

Tensor random_weights(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Tensor w = Tensor::matrix(rows, cols);
  for (double& v : w.values()) v = dist(rng);
  return w;
}

// sum(w * y), a scalar that weights every output differently.
Var weighted_sum(Tape& tape, Var y, const Tensor& w) { return tape.sum(tape.mul(y, tape.constant(w))); }

struct InputRange {
  double lo;
  double hi;
  double keep_out;
};

InputRange range_for(activations::ActivationKind kind) {
  using activations::ActivationKind;
  switch (kind) {
    case ActivationKind::kSine:
    case ActivationKind::kIncodeSine: return {-0.2, 0.2, 0.0};
    case ActivationKind::kGaussian:
    case ActivationKind::kSuperGaussian: return {-0.3, 0.3, 0.0};
    case ActivationKind::kLaplacian: return {-0.5, 0.5, 0.02};
    case ActivationKind::kRelu:
    case ActivationKind::kPrelu:
    case ActivationKind::kElu: return {-2.0, 2.0, 0.02};
    default: return {-2.0, 2.0, 0.0};
  }
}

}  // namespace

core::GradCheckOptions suite_options() {
  core::GradCheckOptions options;
  options.denominator_floor = 1e-9;
  return options;
}

std::vector<GradCheckCase> gradcheck_activations(std::uint64_t seed, std::size_t points) {
  std::vector<GradCheckCase> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(0.7, 1.3);
  for (auto kind : activations::kAllActivations) {
    auto spec = activations::ActivationSpec::defaults(kind);
    const auto range = range_for(kind);
    std::vector<Tensor> point{random_column(points, range.lo, range.hi, range.keep_out, rng)};
    for (const auto& [name, init] : spec.learnable) {
      point.push_back(Tensor::scalar(init == 0.0 ? jitter(rng) - 1.0 : init * jitter(rng)));
    }
    const Tensor w = random_weights(points, 1, rng);
    auto f = [spec, w](Tape& tape, std::span<const Var> v) {
      const Var y = activations::record(tape, spec, v[0], v.subspan(1));
      return weighted_sum(tape, y, w);
    };
    out.push_back({std::string(activations::to_string(kind)), core::grad_check(f, point, suite_options())});
  }
  return out;
}

std::vector<GradCheckCase> gradcheck_encodings(std::uint64_t seed, std::size_t points) {
  std::vector<GradCheckCase> out;
  std::mt19937_64 rng(seed);
  for (auto kind : {encodings::EncodingKind::kIdentity, encodings::EncodingKind::kNeff, encodings::EncodingKind::kRff}) {
    encodings::EncodingConfig config;
    config.kind = kind;
    config.frequencies = kind == encodings::EncodingKind::kNeff ? 4 : 8;
    config.sigma = 2.0;
    config.seed = seed;
    const encodings::Encoder encoder(config);
    const Tensor t = random_column(points, 0.0, 1.0, 0.0, rng);
    const Tensor w = random_weights(points, encoder.output_dim(), rng);
    auto f = [encoder, w](Tape& tape, std::span<const Var> v) { return weighted_sum(tape, encoder.record(tape, v[0]), w); };
    out.push_back({std::string(encodings::to_string(kind)), core::grad_check(f, std::vector<Tensor>{t}, suite_options())});
  }
  return out;
}

std::vector<GradCheckCase> gradcheck_family(models::ModelFamily family, std::uint64_t seed, std::size_t points) {
  std::vector<std::pair<std::string, models::ModelSpec>> specs;
  switch (family) {
    case models::ModelFamily::kMlp: {
      using activations::ActivationKind;
      const std::pair<ActivationKind, encodings::EncodingKind> combos[] = {
          {ActivationKind::kSine, encodings::EncodingKind::kIdentity},
          {ActivationKind::kIncodeSine, encodings::EncodingKind::kNeff},
          {ActivationKind::kGaborWavelet, encodings::EncodingKind::kRff},
          {ActivationKind::kPrelu, encodings::EncodingKind::kNeff},
          {ActivationKind::kTanh, encodings::EncodingKind::kIdentity},
      };
      for (const auto& [act, enc] : combos) {
        models::MLPConfig c;
        c.activation = activations::ActivationSpec::defaults(act);
        c.encoding.kind = enc;
        c.encoding.frequencies = enc == encodings::EncodingKind::kNeff ? 3 : 4;
        c.encoding.sigma = 2.0;
        c.encoding.seed = seed;
        c.init = models::default_init(act);
        c.omega = c.activation.omega();
        c.widths = {c.encoding.output_dim(), 5, 4, 1};
        specs.emplace_back("mlp/" + std::string(encodings::to_string(enc)) + "/" +
                               std::string(activations::to_string(act)),
                           c);
      }
      break;
    }
    case models::ModelFamily::kFourierKan: {
      models::FourierKANConfig a;
      a.widths = {1, 2, 1};
      a.omega_schedule = {6, 3};
      models::FourierKANConfig b;
      b.widths = {1, 3, 2, 1};
      b.omega_schedule = {8, 4, 2};
      specs.emplace_back("fourier-kan/[1,2,1]", a);
      specs.emplace_back("fourier-kan/[1,3,2,1]", b);
      break;
    }
    case models::ModelFamily::kBsplineKan: {
      models::BSplineKANConfig a;
      a.widths = {1, 2, 1};
      models::BSplineKANConfig b;
      b.widths = {1, 3, 2, 1};
      b.grid_size = 4;
      b.degree = 2;
      specs.emplace_back("bspline-kan/[1,2,1]", a);
      specs.emplace_back("bspline-kan/[1,3,2,1]", b);
      break;
    }
  }

  std::vector<GradCheckCase> out;
  std::mt19937_64 rng(seed);
  for (const auto& [label, spec] : specs) {
    models::ModelParams params = models::init_params(spec, seed);
    // Perturb zero-initialized tensors so every path carries signal.
    std::normal_distribution<double> noise(0.0, 0.1);
    for (auto& nt : params.tensors()) {
      if (nt.trainable) {
        for (double& v : nt.value.values()) v += noise(rng);
      }
    }
    const Tensor t = random_column(points, 0.0, 1.0, 0.0, rng);
    const Tensor w = random_weights(points, 1, rng);
    std::vector<std::size_t> trainable;
    std::vector<Tensor> point;
    for (std::size_t i = 0; i < params.tensors().size(); ++i) {
      if (params.tensors()[i].trainable) {
        trainable.push_back(i);
        point.push_back(params.tensors()[i].value);
      }
    }
    auto f = [spec, params, trainable, t, w](Tape& tape, std::span<const Var> v) {
      models::BoundParams bound;
      std::size_t k = 0;
      for (std::size_t i = 0; i < params.tensors().size(); ++i) {
        if (k < trainable.size() && trainable[k] == i) {
          bound.vars.push_back(v[k++]);
        } else {
          bound.vars.push_back(tape.constant(params.tensors()[i].value));
        }
      }
      const Var y = models::record_forward(tape, spec, params, bound, tape.constant(t));
      return weighted_sum(tape, y, w);
    };
    out.push_back({label, core::grad_check(f, point, suite_options())});
  }
  return out;
}

}  // namespace neaf::bench
