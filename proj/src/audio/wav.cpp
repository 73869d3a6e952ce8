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

#include "neaf/audio/wav.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "neaf/core/error.hpp"

namespace neaf::audio {

namespace {

static_assert(std::endian::native == std::endian::little, "WAV codec assumes a little-endian host");

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;

std::uint16_t read_u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }
std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xff));
  out.push_back(static_cast<unsigned char>(v >> 8));
}
void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}
void put_tag(std::vector<unsigned char>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

}  // namespace

AudioClip load_wav(const std::filesystem::path& path, WavLoadOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(path.string() + ": not a RIFF/WAVE file");
  }

  Format fmt;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (available < 16) throw Error(path.string() + ": truncated fmt chunk");
      fmt.tag = read_u16(chunk + 8);
      fmt.channels = read_u16(chunk + 10);
      fmt.sample_rate = read_u32(chunk + 12);
      fmt.bits = read_u16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = available;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw Error(path.string() + ": missing fmt chunk");
  if (fmt.tag != kFormatPcm && fmt.tag != kFormatFloat) {
    throw Error(path.string() + ": unsupported WAV format tag " + std::to_string(fmt.tag));
  }
  if (fmt.tag == kFormatPcm && fmt.bits != 16) {
    throw Error(path.string() + ": unsupported PCM bit depth " + std::to_string(fmt.bits) + " (format tag 1)");
  }
  if (fmt.tag == kFormatFloat && fmt.bits != 32) {
    throw Error(path.string() + ": unsupported float bit depth " + std::to_string(fmt.bits) + " (format tag 3)");
  }
  if (fmt.channels == 0) throw Error(path.string() + ": zero channels");
  if (fmt.channels > 1 && !options.downmix) {
    throw Error(path.string() + ": " + std::to_string(fmt.channels) + " channels; enable downmix to average to mono");
  }
  if (fmt.sample_rate == 0) throw Error(path.string() + ": zero sample rate");

  const std::size_t bytes_per_sample = fmt.bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
  const std::size_t frames = data ? data_size / frame_bytes : 0;
  if (frames == 0) throw Error(path.string() + ": empty data chunk");

  AudioClip clip;
  clip.sample_rate = fmt.sample_rate;
  clip.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < fmt.channels; ++c) {
      const unsigned char* p = data + f * frame_bytes + c * bytes_per_sample;
      double s;
      if (fmt.tag == kFormatPcm) {
        s = static_cast<double>(static_cast<std::int16_t>(read_u16(p))) / 32768.0;
      } else {
        s = static_cast<double>(std::bit_cast<float>(read_u32(p)));
        if (!std::isfinite(s)) throw NumericError(path.string() + ": non-finite float sample");
        s = std::clamp(s, -1.0, 1.0);
      }
      acc += s;
    }
    clip.samples[f] = acc / fmt.channels;
  }
  return clip;
}

void save_wav(const AudioClip& clip, const std::filesystem::path& path, WavEncoding encoding) {
  if (clip.sample_rate == 0) throw ContractError("save_wav: sample rate must be positive");
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(clip.samples.size() * (bits / 8));

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, clip.sample_rate);
  put_u32(out, clip.sample_rate * (bits / 8));
  put_u16(out, static_cast<std::uint16_t>(bits / 8));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (double s : clip.samples) {
    const double v = std::isnan(s) ? 0.0 : std::clamp(s, -1.0, 1.0);
    if (pcm) {
      const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
      put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

}  // namespace neaf::audio
