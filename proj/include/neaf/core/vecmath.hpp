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

namespace neaf::core::vecmath {

// Elementwise transcendental loops vectorized through the platform's SIMD math
// library. Results can differ from std::sin and friends in the last ulp but are
// deterministic for a given machine. Input and output must not overlap.

/// y[i] = sin(scale * x[i])
void sin(const double* x, double* y, std::size_t n, double scale = 1.0) noexcept;
/// y[i] = cos(scale * x[i])
void cos(const double* x, double* y, std::size_t n, double scale = 1.0) noexcept;
/// y[i] = exp(x[i])
void exp(const double* x, double* y, std::size_t n) noexcept;

}  // namespace neaf::core::vecmath
