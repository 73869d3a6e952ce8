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

#pragma once

#include <memory>

#include "neaf/core/tape.hpp"
#include "neaf/models/config.hpp"
#include "neaf/models/params.hpp"

namespace neaf::models {

/// Maps Z [B, d_in] to [B, 2 * Omega * d_in] holding cos(k z_i) then sin(k z_i),
/// column (part * Omega + (k - 1)) * d_in + i, for k = 1..Omega.
class FourierFeaturesOp final : public core::CustomOp {
 public:
  explicit FourierFeaturesOp(int omega);
  std::string_view name() const override { return "fourier_features"; }
  core::Tensor forward(std::span<const core::Tensor* const> inputs) const override;
  void backward(std::span<const core::Tensor* const> inputs, const core::Tensor& output,
                const core::Tensor& grad_output, std::span<core::Tensor* const> grads) const override;

 private:
  int omega_;
};

void init_fourier_kan(const FourierKANConfig& config, std::uint64_t seed, ModelParams& params);

/// Layer l coefficient tensor of shape [2, Omega_l, d_in, d_out] (cos block, sin block).
std::string fourier_kan_coef_name(std::size_t layer);
std::string fourier_kan_bias_name(std::size_t layer);

core::Var record_fourier_kan(core::Tape& tape, const FourierKANConfig& config, std::span<const core::Var> vars,
                             core::Var t);

std::size_t fourier_kan_param_count(const FourierKANConfig& config);

}  // namespace neaf::models
