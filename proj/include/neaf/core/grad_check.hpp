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
#include <functional>
#include <span>
#include <vector>

#include "neaf/core/tape.hpp"

namespace neaf::core {

/// Builds a scalar on `tape` from leaves holding the current parameter values.
using ScalarFunction = std::function<Var(Tape& tape, std::span<const Var> params)>;

struct GradCheckOptions {
  double eps = 1e-6;
  /// Floor of the relative-error denominator.
  double denominator_floor = 1e-12;
  /// One-sided slopes disagreeing by more than this (relative, plus the
  /// absolute floor) are re-probed with a 10x smaller step; if the gap does
  /// not shrink the coordinate is treated as a kink and skipped.
  double kink_tolerance = 1e-3;
  double kink_floor = 1e-6;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  /// Coordinates skipped as non-differentiable.
  std::size_t skipped = 0;

  bool all_skipped() const noexcept { return checked == 0 && skipped > 0; }
};

/// Compares tape gradients against central finite differences at `point`.
GradCheckResult grad_check(const ScalarFunction& f, std::span<const Tensor> point, GradCheckOptions options = {});

/// Evaluates f without recording gradients.
double evaluate_scalar(const ScalarFunction& f, std::span<const Tensor> point);

}  // namespace neaf::core
