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
#include <span>
#include <vector>

#include "neaf/core/tape.hpp"
#include "neaf/models/config.hpp"
#include "neaf/models/params.hpp"

namespace neaf::models {

/// Cox-de Boor basis values B_{i,degree}(x), i = 0 .. knots.size() - degree - 2.
/// Zero-order pieces are indicators of [t_i, t_{i+1}); 0/0 terms count as 0, so
/// x outside [t_0, t_last) yields an all-zero basis.
std::vector<double> bspline_basis(double x, std::span<const double> knots, int degree);

/// d/dx of every basis function.
std::vector<double> bspline_basis_derivative(double x, std::span<const double> knots, int degree);

class KnotTable;

/// Maps X [B, d_in] to [B, d_in * n_basis]; column i * n_basis + m holds B_m(x_i).
class BSplineBasisOp final : public core::CustomOp {
 public:
  BSplineBasisOp(std::vector<double> knots, int degree);
  std::string_view name() const override { return "bspline_basis"; }
  core::Tensor forward(std::span<const core::Tensor* const> inputs) const override;
  void backward(std::span<const core::Tensor* const> inputs, const core::Tensor& output,
                const core::Tensor& grad_output, std::span<core::Tensor* const> grads) const override;

 private:
  std::shared_ptr<const KnotTable> table_;
  std::size_t basis_count_;
};

void init_bspline_kan(const BSplineKANConfig& config, std::uint64_t seed, ModelParams& params);

/// [d_in, d_out] residual scales a and [d_in, n_basis, d_out] spline coefficients of layer l.
std::string bspline_scale_name(std::size_t layer);
std::string bspline_coef_name(std::size_t layer);

core::Var record_bspline_kan(core::Tape& tape, const BSplineKANConfig& config, std::span<const core::Var> vars,
                             core::Var t);

std::size_t bspline_kan_param_count(const BSplineKANConfig& config);

}  // namespace neaf::models
