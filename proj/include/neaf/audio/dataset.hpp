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
#include <vector>

#include "neaf/audio/clip.hpp"

namespace neaf::audio {

/// (t, a(t)) pairs with t spanning [0, 1] uniformly.
struct CoordinateDataset {
  std::vector<double> coords;
  std::vector<double> targets;

  std::size_t size() const noexcept { return coords.size(); }
};

/// coords[i] = i / (N - 1), targets = samples. Requires N >= 2.
CoordinateDataset to_dataset(const AudioClip& clip);

/// Uniform grid of n points spanning [0, 1] (n >= 2), or {0} when n == 1.
std::vector<double> unit_grid(std::size_t n);

using Batch = std::vector<std::size_t>;

/// Seeded permutation of [0, n) chunked into ceil(n / batch_size) batches.
/// The permutation is a deterministic function of (seed, epoch).
std::vector<Batch> batch_iter(std::size_t n, std::size_t batch_size, std::uint64_t seed, std::uint64_t epoch);

}  // namespace neaf::audio
