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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/core/tape.hpp"

namespace neaf::encodings {

enum class EncodingKind { kIdentity, kNeff, kRff };

std::string_view to_string(EncodingKind kind) noexcept;
EncodingKind encoding_from_string(std::string_view name);

struct EncodingConfig {
  EncodingKind kind = EncodingKind::kIdentity;
  int frequencies = 12;  // L
  double sigma = 10.0;   // standard deviation of RFF frequencies
  std::uint64_t seed = 0;

  /// 1 for identity, 2L otherwise.
  std::size_t output_dim() const noexcept;
  void validate() const;
};

/// Number of NeFF frequencies for a given batch size: floor(log2(B / 4)).
int default_neff_frequencies(std::size_t batch_size);

std::vector<double> encode_identity(double t);
/// [sin(2^0 pi t), cos(2^0 pi t), ..., sin(2^(L-1) pi t), cos(2^(L-1) pi t)]
std::vector<double> encode_neff(double t, int frequencies);
/// b_i ~ Normal(0, sigma^2), i = 1..L, from a generator seeded with `seed`.
std::vector<double> sample_rff_frequencies(int frequencies, double sigma, std::uint64_t seed);
/// [cos(2 pi b_1 t), sin(2 pi b_1 t), ..., cos(2 pi b_L t), sin(2 pi b_L t)]
std::vector<double> encode_rff(double t, std::span<const double> b);

/// An encoding with its RFF frequencies frozen at construction.
class Encoder {
 public:
  explicit Encoder(EncodingConfig config);
  /// Rebuilds an RFF encoder from stored frequencies instead of re-sampling.
  Encoder(EncodingConfig config, std::vector<double> rff_frequencies);

  const EncodingConfig& config() const noexcept { return config_; }
  std::size_t output_dim() const noexcept { return config_.output_dim(); }
  std::span<const double> rff_frequencies() const noexcept { return rff_; }

  std::vector<double> encode(double t) const;
  /// Rows are encode(t[i]); shape [t.size(), output_dim()].
  core::Tensor encode_batch(std::span<const double> t) const;
  /// Records the encoding of a [B, 1] coordinate node, differentiable in t.
  core::Var record(core::Tape& tape, core::Var t) const;

 private:
  void encode_into(double t, double* out) const;
  void derivative_into(double t, double* out) const;

  class Op;
  EncodingConfig config_;
  std::vector<double> rff_;
};

nlohmann::json to_json(const EncodingConfig& config);
EncodingConfig encoding_from_json(const nlohmann::json& doc);

}  // namespace neaf::encodings
