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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/audio/clip.hpp"

namespace neaf::audio {

struct SineComponent {
  double amp = 1.0;
  double freq = 440.0;  // Hz
  double phase = 0.0;   // rad
};

struct SynthSpec {
  std::uint32_t sample_rate = 16000;
  double duration = 1.0;  // s
  std::vector<SineComponent> components;
};

/// samples[i] = sum_k amp_k * sin(2 pi freq_k i / sr + phase_k), floor(duration * sr) samples.
/// Throws if the resulting peak exceeds 1.
AudioClip synth_signal(const SynthSpec& spec);

SynthSpec synth_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const SynthSpec& spec);

/// Deterministic music-like test clip: a seeded melody of plucked harmonic
/// notes over a sustained bass, peak-normalized to `peak`.
struct MusicSpec {
  std::uint32_t sample_rate = 16000;
  double duration = 2.0;
  std::uint64_t seed = 7;
  double note_length = 0.25;  // s
  double peak = 0.8;
};
AudioClip synth_music(const MusicSpec& spec);

}  // namespace neaf::audio
