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

// Built with fast-math so the compiler can call the vector variants of sin,
// cos and exp. Nothing else belongs in this file.
//
// Every element goes through the same full-width vector call: the tail is
// copied into a padded block. Otherwise a value would depend on its position
// in the array (vector body vs scalar remainder), and two evaluations of the
// same coordinate could differ in the last bit.
#include "neaf/core/vecmath.hpp"

#include <algorithm>
#include <cmath>

namespace neaf::core::vecmath {

namespace {

constexpr std::size_t kBlock = 8;

template <class F>
inline void blocked(const double* __restrict x, double* __restrict y, std::size_t n, F f) noexcept {
  const std::size_t body = n - n % kBlock;
  for (std::size_t i = 0; i < body; i += kBlock) f(x + i, y + i);
  if (body < n) {
    alignas(64) double in[kBlock] = {};
    alignas(64) double out[kBlock];
    std::copy(x + body, x + n, in);
    f(in, out);
    std::copy(out, out + (n - body), y + body);
  }
}

}  // namespace

void sin(const double* __restrict x, double* __restrict y, std::size_t n, double scale) noexcept {
  blocked(x, y, n, [scale](const double* __restrict a, double* __restrict b) {
#pragma omp simd
    for (std::size_t i = 0; i < kBlock; ++i) b[i] = std::sin(scale * a[i]);
  });
}

void cos(const double* __restrict x, double* __restrict y, std::size_t n, double scale) noexcept {
  blocked(x, y, n, [scale](const double* __restrict a, double* __restrict b) {
#pragma omp simd
    for (std::size_t i = 0; i < kBlock; ++i) b[i] = std::cos(scale * a[i]);
  });
}

void exp(const double* __restrict x, double* __restrict y, std::size_t n) noexcept {
  blocked(x, y, n, [](const double* __restrict a, double* __restrict b) {
#pragma omp simd
    for (std::size_t i = 0; i < kBlock; ++i) b[i] = std::exp(a[i]);
  });
}

}  // namespace neaf::core::vecmath
