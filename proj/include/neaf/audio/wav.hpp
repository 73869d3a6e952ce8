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

#include <filesystem>

#include "neaf/audio/clip.hpp"

namespace neaf::audio {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavLoadOptions {
  /// Average multi-channel frames to mono instead of rejecting them.
  bool downmix = false;
};

/// Reads a RIFF/WAVE file with PCM-16 (format tag 1) or float-32 (tag 3) data.
AudioClip load_wav(const std::filesystem::path& path, WavLoadOptions options = {});

/// Writes a mono WAV; samples are clamped to [-1, 1] first.
void save_wav(const AudioClip& clip, const std::filesystem::path& path, WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace neaf::audio
