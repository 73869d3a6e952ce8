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

#include "neaf/core/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "neaf/core/error.hpp"

namespace neaf::core {

double cosine_anneal(std::int64_t step, std::int64_t total_steps, double lr0) {
  if (total_steps < 1) throw ContractError("cosine_anneal: total_steps must be >= 1");
  if (step < 0) throw ContractError("cosine_anneal: negative step");
  step = std::min(step, total_steps);
  if (step == total_steps) return 0.0;
  const double phase = std::numbers::pi * static_cast<double>(step) / static_cast<double>(total_steps);
  return lr0 * (1.0 + std::cos(phase)) / 2.0;
}

}  // namespace neaf::core
