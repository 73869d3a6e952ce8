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

#include "neaf/models/init.hpp"

#include <cmath>

#include "neaf/core/error.hpp"

namespace neaf::models {

double sitzmann_bound(std::size_t fan_in, bool first_layer, double c, double omega) {
  const double root = std::sqrt(static_cast<double>(fan_in));
  return first_layer ? 1.0 / root : c / (omega * root);
}

double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

double kaiming_variance(std::size_t fan_in) { return 2.0 / static_cast<double>(fan_in); }

double fourier_kan_variance(int omega, std::size_t fan_in) {
  return 1.0 / (static_cast<double>(omega) * static_cast<double>(fan_in));
}

void init_weight(core::Tensor& weight, InitScheme scheme, bool first_layer, double sitzmann_c, double omega,
                 std::mt19937_64& rng) {
  if (weight.rank() != 2) throw ContractError("init_weight expects a [fan_in, fan_out] tensor");
  const std::size_t fan_in = weight.shape()[0];
  const std::size_t fan_out = weight.shape()[1];
  switch (scheme) {
    case InitScheme::kKaiming: {
      std::normal_distribution<double> dist(0.0, std::sqrt(kaiming_variance(fan_in)));
      for (double& w : weight.values()) w = dist(rng);
      return;
    }
    case InitScheme::kXavier: {
      const double bound = xavier_bound(fan_in, fan_out);
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (double& w : weight.values()) w = dist(rng);
      return;
    }
    case InitScheme::kSitzmann: {
      const double bound = sitzmann_bound(fan_in, first_layer, sitzmann_c, omega);
      std::uniform_real_distribution<double> dist(-bound, bound);
      for (double& w : weight.values()) w = dist(rng);
      return;
    }
  }
}

}  // namespace neaf::models
