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
#include <vector>

namespace neaf::audio {

/// Mono waveform with amplitudes in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  std::uint32_t sample_rate = 0;

  double duration() const noexcept {
    return sample_rate ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  /// Throws ContractError unless the rate is positive, samples are finite and within [-1, 1].
  void validate() const;
};

/// Scales the clip so its peak magnitude equals `peak` (no-op on silence).
AudioClip normalize_peak(AudioClip clip, double peak = 1.0);

}  // namespace neaf::audio
