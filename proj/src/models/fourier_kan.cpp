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

#include "neaf/models/fourier_kan.hpp"

#include <cmath>
#include <random>

#include "neaf/core/error.hpp"
#include "neaf/models/init.hpp"

namespace neaf::models {

namespace {
// The angle-addition recurrence is re-anchored on exact sin/cos this often.
constexpr int kResync = 32;
}  // namespace

FourierFeaturesOp::FourierFeaturesOp(int omega) : omega_(omega) {
  if (omega < 1) throw ContractError("fourier features need Omega >= 1");
}

core::Tensor FourierFeaturesOp::forward(std::span<const core::Tensor* const> inputs) const {
  const core::Tensor& z = *inputs[0];
  const std::size_t rows = z.rows();
  const std::size_t din = z.cols();
  const std::size_t block = static_cast<std::size_t>(omega_) * din;
  core::Tensor out = core::Tensor::matrix(rows, 2 * block);
  for (std::size_t r = 0; r < rows; ++r) {
    double* cos_row = out.data() + r * 2 * block;
    double* sin_row = cos_row + block;
    for (std::size_t i = 0; i < din; ++i) {
      const double x = z[r * din + i];
      const double c1 = std::cos(x);
      const double s1 = std::sin(x);
      double c = c1;
      double s = s1;
      for (int k = 1; k <= omega_; ++k) {
        if (k > 1) {
          if (k % kResync == 0) {
            c = std::cos(k * x);
            s = std::sin(k * x);
          } else {
            const double cn = c * c1 - s * s1;
            s = s * c1 + c * s1;
            c = cn;
          }
        }
        const std::size_t col = static_cast<std::size_t>(k - 1) * din + i;
        cos_row[col] = c;
        sin_row[col] = s;
      }
    }
  }
  return out;
}

void FourierFeaturesOp::backward(std::span<const core::Tensor* const> inputs, const core::Tensor& output,
                                 const core::Tensor& grad_output, std::span<core::Tensor* const> grads) const {
  if (!grads[0]) return;
  const core::Tensor& z = *inputs[0];
  const std::size_t rows = z.rows();
  const std::size_t din = z.cols();
  const std::size_t block = static_cast<std::size_t>(omega_) * din;
  core::Tensor& dz = *grads[0];
  for (std::size_t r = 0; r < rows; ++r) {
    const double* cos_row = output.data() + r * 2 * block;
    const double* sin_row = cos_row + block;
    const double* g_cos = grad_output.data() + r * 2 * block;
    const double* g_sin = g_cos + block;
    for (std::size_t i = 0; i < din; ++i) {
      double acc = 0.0;
      for (int k = 1; k <= omega_; ++k) {
        const std::size_t col = static_cast<std::size_t>(k - 1) * din + i;
        acc += k * (g_sin[col] * cos_row[col] - g_cos[col] * sin_row[col]);
      }
      dz[r * din + i] += acc;
    }
  }
}

std::string fourier_kan_coef_name(std::size_t layer) { return "fkan." + std::to_string(layer) + ".coef"; }
std::string fourier_kan_bias_name(std::size_t layer) { return "fkan." + std::to_string(layer) + ".bias"; }

void init_fourier_kan(const FourierKANConfig& config, std::uint64_t seed, ModelParams& params) {
  config.validate();
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
    const std::size_t din = config.widths[l];
    const std::size_t dout = config.widths[l + 1];
    const auto omega = static_cast<std::size_t>(config.omega_schedule[l]);
    core::Tensor coef(core::Tensor::Shape{2, omega, din, dout});
    std::normal_distribution<double> dist(0.0, std::sqrt(fourier_kan_variance(config.omega_schedule[l], din)));
    for (double& v : coef.values()) v = dist(rng);
    params.add(fourier_kan_coef_name(l), std::move(coef));
    params.add(fourier_kan_bias_name(l), core::Tensor(core::Tensor::Shape{dout}));
  }
}

core::Var record_fourier_kan(core::Tape& tape, const FourierKANConfig& config, std::span<const core::Var> vars,
                             core::Var t) {
  const std::size_t layers = config.widths.size() - 1;
  if (vars.size() != 2 * layers) throw ContractError("fourier-kan: expected " + std::to_string(2 * layers) + " tensors");
  core::Var z = t;
  for (std::size_t l = 0; l < layers; ++l) {
    const core::Var features = tape.custom(std::make_shared<FourierFeaturesOp>(config.omega_schedule[l]), {z});
    z = tape.add(tape.matmul(features, vars[2 * l]), vars[2 * l + 1]);
    if (!tape.value(z).all_finite()) throw NumericError("fourier-kan: non-finite value in layer " + std::to_string(l));
  }
  return z;
}

std::size_t fourier_kan_param_count(const FourierKANConfig& config) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
    n += 2 * static_cast<std::size_t>(config.omega_schedule[l]) * config.widths[l] * config.widths[l + 1] +
         config.widths[l + 1];
  }
  return n;
}

}  // namespace neaf::models
