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

#include "neaf/audio/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "neaf/core/error.hpp"

namespace neaf::audio {

void AudioClip::validate() const {
  if (sample_rate == 0) throw ContractError("audio clip has zero sample rate");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) throw NumericError("audio sample " + std::to_string(i) + " is not finite");
    if (std::abs(samples[i]) > 1.0) throw ContractError("audio sample " + std::to_string(i) + " outside [-1, 1]");
  }
}

AudioClip normalize_peak(AudioClip clip, double peak) {
  double m = 0.0;
  for (double s : clip.samples) m = std::max(m, std::abs(s));
  if (m > 0.0) {
    for (double& s : clip.samples) s *= peak / m;
  }
  return clip;
}

std::vector<double> unit_grid(std::size_t n) {
  std::vector<double> t(n, 0.0);
  if (n < 2) return t;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / denom;
  return t;
}

CoordinateDataset to_dataset(const AudioClip& clip) {
  if (clip.samples.size() < 2) throw ContractError("to_dataset: need at least 2 samples");
  clip.validate();
  return CoordinateDataset{unit_grid(clip.samples.size()), clip.samples};
}

std::vector<Batch> batch_iter(std::size_t n, std::size_t batch_size, std::uint64_t seed, std::uint64_t epoch) {
  if (batch_size == 0) throw ContractError("batch_iter: batch_size must be >= 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(epoch), static_cast<std::uint32_t>(epoch >> 32), 0x6261u};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Batch> batches;
  batches.reserve((n + batch_size - 1) / batch_size);
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t stop = std::min(n, start + batch_size);
    batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return batches;
}

}  // namespace neaf::audio
