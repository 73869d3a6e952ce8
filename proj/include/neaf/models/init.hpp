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
#include <random>

#include "neaf/core/tensor.hpp"
#include "neaf/models/config.hpp"

namespace neaf::models {

/// Half-width of the Sitzmann uniform distribution.
/// First layer: 1 / sqrt(fan_in); later layers: c / (omega * sqrt(fan_in)).
double sitzmann_bound(std::size_t fan_in, bool first_layer, double c, double omega);

/// sqrt(6 / (fan_in + fan_out)).
double xavier_bound(std::size_t fan_in, std::size_t fan_out);

/// 2 / fan_in.
double kaiming_variance(std::size_t fan_in);

/// 1 / (Omega * fan_in).
double fourier_kan_variance(int omega, std::size_t fan_in);

/// Fills a [fan_in, fan_out] weight tensor according to the scheme.
void init_weight(core::Tensor& weight, InitScheme scheme, bool first_layer, double sitzmann_c, double omega,
                 std::mt19937_64& rng);

}  // namespace neaf::models
