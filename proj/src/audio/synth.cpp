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

#include "neaf/audio/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "neaf/core/error.hpp"

namespace neaf::audio {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

AudioClip synth_signal(const SynthSpec& spec) {
  if (spec.sample_rate == 0) throw ContractError("synth_signal: sample rate must be positive");
  if (!(spec.duration > 0.0)) throw ContractError("synth_signal: duration must be positive");
  const auto n = static_cast<std::size_t>(std::floor(spec.duration * spec.sample_rate));
  AudioClip clip;
  clip.sample_rate = spec.sample_rate;
  clip.samples.assign(n, 0.0);
  const double sr = spec.sample_rate;
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& c : spec.components) s += c.amp * std::sin(kTwoPi * c.freq * static_cast<double>(i) / sr + c.phase);
    clip.samples[i] = s;
    peak = std::max(peak, std::abs(s));
  }
  if (peak > 1.0 + 1e-12) {
    throw ContractError("synth_signal: peak amplitude " + std::to_string(peak) + " exceeds 1; rescale components");
  }
  for (double& s : clip.samples) s = std::clamp(s, -1.0, 1.0);
  return clip;
}

SynthSpec synth_spec_from_json(const nlohmann::json& doc) {
  SynthSpec spec;
  spec.sample_rate = doc.at("sample_rate").get<std::uint32_t>();
  spec.duration = doc.at("duration").get<double>();
  for (const auto& c : doc.value("components", nlohmann::json::array())) {
    spec.components.push_back(
        SineComponent{c.value("amp", 1.0), c.at("freq").get<double>(), c.value("phase", 0.0)});
  }
  return spec;
}

nlohmann::json to_json(const SynthSpec& spec) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : spec.components) comps.push_back({{"amp", c.amp}, {"freq", c.freq}, {"phase", c.phase}});
  return {{"sample_rate", spec.sample_rate}, {"duration", spec.duration}, {"components", comps}};
}

AudioClip synth_music(const MusicSpec& spec) {
  if (spec.sample_rate == 0 || !(spec.duration > 0.0) || !(spec.note_length > 0.0)) {
    throw ContractError("synth_music: rate, duration and note length must be positive");
  }
  // A-minor pentatonic over two octaves
  constexpr std::array<double, 10> kScale{220.00, 261.63, 293.66, 329.63, 392.00,
                                          440.00, 523.25, 587.33, 659.26, 783.99};
  constexpr std::array<double, 4> kHarmonics{1.0, 0.5, 0.25, 0.125};
  const double sr = spec.sample_rate;
  const auto n = static_cast<std::size_t>(std::floor(spec.duration * sr));
  std::vector<double> y(n, 0.0);

  std::mt19937_64 rng(spec.seed);
  const auto notes = static_cast<std::size_t>(std::ceil(spec.duration / spec.note_length));
  const auto release = static_cast<std::size_t>(0.1 * sr);
  for (std::size_t k = 0; k < notes; ++k) {
    const double f = kScale[rng() % kScale.size()];
    const auto start = static_cast<std::size_t>(static_cast<double>(k) * spec.note_length * sr);
    const auto stop = std::min(n, static_cast<std::size_t>(static_cast<double>(k + 1) * spec.note_length * sr) + release);
    for (std::size_t i = start; i < stop; ++i) {
      const double t = static_cast<double>(i - start) / sr;
      const double envelope = std::min(t / 0.01, 1.0) * std::exp(-4.0 * t);
      double s = 0.0;
      for (std::size_t h = 0; h < kHarmonics.size(); ++h) s += kHarmonics[h] * std::sin(kTwoPi * f * (h + 1) * t);
      y[i] += envelope * s;
    }
  }
  for (std::size_t i = 0; i < n; ++i) y[i] += 0.3 * std::sin(kTwoPi * 110.0 * static_cast<double>(i) / sr);

  AudioClip clip;
  clip.sample_rate = spec.sample_rate;
  clip.samples = std::move(y);
  return normalize_peak(std::move(clip), spec.peak);
}

}  // namespace neaf::audio
