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
#include <cstdint>
#include <string>
#include <vector>

#include "neaf/core/grad_check.hpp"
#include "neaf/models/config.hpp"

namespace neaf::bench {

struct GradCheckCase {
  std::string label;
  core::GradCheckResult result;
};

/// Every activation on `points` random inputs away from its kinks, with
/// random learnable parameters.
std::vector<GradCheckCase> gradcheck_activations(std::uint64_t seed, std::size_t points = 100);
/// Every encoding, differentiated with respect to t.
std::vector<GradCheckCase> gradcheck_encodings(std::uint64_t seed, std::size_t points = 100);
/// Small random configs of one family, differentiated with respect to all trainable tensors.
std::vector<GradCheckCase> gradcheck_family(models::ModelFamily family, std::uint64_t seed, std::size_t points = 100);

/// Options used by the suite: default step, relative error floor of 1e-9.
core::GradCheckOptions suite_options();

}  // namespace neaf::bench
