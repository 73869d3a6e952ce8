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

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/activations.hpp"
#include "neaf/encodings.hpp"

namespace neaf::models {

enum class InitScheme { kKaiming, kXavier, kSitzmann };

std::string_view to_string(InitScheme scheme) noexcept;
InitScheme init_from_string(std::string_view name);
/// Scheme used when a config does not name one: Sitzmann for the sine
/// family, Kaiming for rectifier-like kinds, Xavier otherwise.
InitScheme default_init(activations::ActivationKind kind) noexcept;

/// Coordinate-MLP: encoding, hidden layers sigma(W z + b), affine head.
struct MLPConfig {
  /// [d_0, ..., d_k]; d_0 equals the encoding output dimension, d_k = 1.
  std::vector<std::size_t> widths{1, 256, 256, 256, 256, 256, 1};
  activations::ActivationSpec activation = activations::ActivationSpec::defaults(activations::ActivationKind::kSine);
  encodings::EncodingConfig encoding;
  InitScheme init = InitScheme::kSitzmann;
  double sitzmann_c = 6.0;
  double omega = 30.0;

  void validate() const;
  /// Sitzmann init paired with a non-sine activation; allowed but worth a warning.
  bool init_mismatch() const noexcept;
};

/// Fourier-KAN with a per-transition frequency threshold.
struct FourierKANConfig {
  std::vector<std::size_t> widths{1, 64, 64, 64, 64, 1};
  std::vector<int> omega_schedule{1024, 5, 5, 5, 3};

  void validate() const;
};

/// KAN whose edges are a * silu(x) + sum_m c_m B_m(x) on a uniform grid over [-1, 1].
struct BSplineKANConfig {
  std::vector<std::size_t> widths{1, 96, 96, 96, 96, 1};
  int degree = 3;
  int grid_size = 5;

  void validate() const;
  std::size_t basis_count() const noexcept { return static_cast<std::size_t>(grid_size + degree); }
  /// Uniform knots over [-1, 1] extended by `degree` knots on each side.
  std::vector<double> knots() const;
};

using ModelSpec = std::variant<MLPConfig, FourierKANConfig, BSplineKANConfig>;

enum class ModelFamily { kMlp, kFourierKan, kBsplineKan };
std::string_view to_string(ModelFamily family) noexcept;
ModelFamily family_from_string(std::string_view name);
ModelFamily family_of(const ModelSpec& spec) noexcept;

void validate(const ModelSpec& spec);

/// MLP widths for a given encoding: [dim(encoding), hidden..., 1].
std::vector<std::size_t> mlp_widths(const encodings::EncodingConfig& encoding, std::size_t hidden_width,
                                    std::size_t hidden_layers);

nlohmann::json to_json(const ModelSpec& spec);
ModelSpec model_from_json(const nlohmann::json& doc);

}  // namespace neaf::models
