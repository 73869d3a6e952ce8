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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neaf/core/tensor.hpp"

namespace neaf::core {

/// Moment accumulators and step counter for the Adam optimizer.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;

  AdamState() = default;
  explicit AdamState(std::span<const Tensor> params);
};

/// One bias-corrected Adam update, in place.
///
/// All gradients are validated (shape and finiteness) before any parameter
/// moves, so a failed call leaves params and state untouched. `names`, when
/// given, labels parameters in error messages.
void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state, double lr,
               std::span<const std::string> names = {});

}  // namespace neaf::core
