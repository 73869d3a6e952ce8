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

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/core/tape.hpp"

namespace neaf::activations {

enum class ActivationKind {
  kGaborWavelet,
  kQuadratic,
  kMultiQuadratic,
  kExpSin,
  kSigmoid,
  kSoftplus,
  kTanh,
  kElu,
  kSilu,
  kPrelu,
  kRelu,
  kGaussian,
  kLaplacian,
  kSuperGaussian,
  kSine,
  kIncodeSine,
};

inline constexpr std::array<ActivationKind, 16> kAllActivations{
    ActivationKind::kGaborWavelet, ActivationKind::kQuadratic,     ActivationKind::kMultiQuadratic,
    ActivationKind::kExpSin,       ActivationKind::kSigmoid,       ActivationKind::kSoftplus,
    ActivationKind::kTanh,         ActivationKind::kElu,           ActivationKind::kSilu,
    ActivationKind::kPrelu,        ActivationKind::kRelu,          ActivationKind::kGaussian,
    ActivationKind::kLaplacian,    ActivationKind::kSuperGaussian, ActivationKind::kSine,
    ActivationKind::kIncodeSine,
};

std::string_view to_string(ActivationKind kind) noexcept;
ActivationKind activation_from_string(std::string_view name);

/// Names of the fixed hyperparameters of a kind, in canonical order.
std::span<const std::string_view> hyper_names(ActivationKind kind) noexcept;
/// Names of the trainable scalars of a kind, in canonical order.
std::span<const std::string_view> learnable_names(ActivationKind kind) noexcept;

/// True for sin(omega x) style activations that want frequency-aware init.
bool is_sine_family(ActivationKind kind) noexcept;

struct ActivationSpec {
  ActivationKind kind = ActivationKind::kRelu;
  std::map<std::string, double> hyper;
  /// Initial values of the trainable scalars.
  std::map<std::string, double> learnable;

  /// Spec with every parameter at its default value.
  static ActivationSpec defaults(ActivationKind kind);

  /// Every parameter the formula needs is present exactly once, in the right map.
  void validate() const;
  /// omega for the sine family, 1 otherwise.
  double omega() const;
};

/// Flat parameter block used by the evaluation kernels.
struct ActivationParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double omega = 0.0;
};

ActivationParams resolve(const ActivationSpec& spec);

/// Derivatives of one activation value. dtheta follows learnable_names(kind).
struct ActivationGrad {
  double dx = 0.0;
  std::array<double, 4> dtheta{};
};

double apply(const ActivationSpec& spec, double x);
ActivationGrad apply_grad(const ActivationSpec& spec, double x);

double evaluate(ActivationKind kind, const ActivationParams& p, double x) noexcept;
double evaluate(ActivationKind kind, const ActivationParams& p, double x, ActivationGrad& grad) noexcept;

/// Records sigma(x) elementwise; `learnable` holds one scalar node per entry of learnable_names(kind).
core::Var record(core::Tape& tape, const ActivationSpec& spec, core::Var x, std::span<const core::Var> learnable);

nlohmann::json to_json(const ActivationSpec& spec);
ActivationSpec activation_from_json(const nlohmann::json& doc);

}  // namespace neaf::activations
