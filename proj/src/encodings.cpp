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

#include "neaf/encodings.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "neaf/core/error.hpp"

namespace neaf::encodings {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

std::string_view to_string(EncodingKind kind) noexcept {
  switch (kind) {
    case EncodingKind::kIdentity: return "identity";
    case EncodingKind::kNeff: return "neff";
    case EncodingKind::kRff: return "rff";
  }
  return "?";
}

EncodingKind encoding_from_string(std::string_view name) {
  if (name == "identity" || name == "none" || name == "no") return EncodingKind::kIdentity;
  if (name == "neff") return EncodingKind::kNeff;
  if (name == "rff") return EncodingKind::kRff;
  throw ContractError("unknown encoding '" + std::string(name) + "' (expected identity, neff or rff)");
}

std::size_t EncodingConfig::output_dim() const noexcept {
  return kind == EncodingKind::kIdentity ? 1 : 2 * static_cast<std::size_t>(frequencies);
}

void EncodingConfig::validate() const {
  if (kind != EncodingKind::kIdentity && frequencies < 1) throw ContractError("encoding needs L >= 1");
  // pi * 2^k overflows a double near k = 1023.
  if (kind == EncodingKind::kNeff && frequencies > 1000) throw ContractError("NeFF L must be <= 1000");
  if (kind == EncodingKind::kRff && !(sigma > 0.0)) throw ContractError("RFF sigma must be positive");
}

int default_neff_frequencies(std::size_t batch_size) {
  if (batch_size < 8) return 1;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(batch_size) / 4.0)));
}

std::vector<double> encode_identity(double t) { return {t}; }

std::vector<double> encode_neff(double t, int frequencies) {
  if (frequencies < 1) throw ContractError("encode_neff: L must be >= 1");
  std::vector<double> out(2 * static_cast<std::size_t>(frequencies));
  for (int k = 0; k < frequencies; ++k) {
    const double arg = std::ldexp(kPi, k) * t;
    out[2 * k] = std::sin(arg);
    out[2 * k + 1] = std::cos(arg);
  }
  return out;
}

std::vector<double> sample_rff_frequencies(int frequencies, double sigma, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw ContractError("sample_rff_frequencies: sigma must be positive");
  if (frequencies < 1) throw ContractError("sample_rff_frequencies: L must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> b(static_cast<std::size_t>(frequencies));
  for (double& v : b) v = normal(rng);
  return b;
}

std::vector<double> encode_rff(double t, std::span<const double> b) {
  std::vector<double> out(2 * b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double arg = kTwoPi * b[i] * t;
    out[2 * i] = std::cos(arg);
    out[2 * i + 1] = std::sin(arg);
  }
  return out;
}

class Encoder::Op final : public core::CustomOp {
 public:
  explicit Op(const Encoder& encoder) : encoder_(encoder) {}
  std::string_view name() const override { return "encode"; }

  core::Tensor forward(std::span<const core::Tensor* const> inputs) const override {
    return encoder_.encode_batch(inputs[0]->values());
  }

  void backward(std::span<const core::Tensor* const> inputs, const core::Tensor&, const core::Tensor& grad_output,
                std::span<core::Tensor* const> grads) const override {
    if (!grads[0]) return;
    const std::size_t dim = encoder_.output_dim();
    std::vector<double> d(dim);
    const core::Tensor& t = *inputs[0];
    for (std::size_t r = 0; r < t.size(); ++r) {
      encoder_.derivative_into(t[r], d.data());
      double acc = 0.0;
      for (std::size_t j = 0; j < dim; ++j) acc += grad_output[r * dim + j] * d[j];
      (*grads[0])[r] += acc;
    }
  }

 private:
  Encoder encoder_;
};

Encoder::Encoder(EncodingConfig config) : config_(config) {
  config_.validate();
  if (config_.kind == EncodingKind::kRff) rff_ = sample_rff_frequencies(config_.frequencies, config_.sigma, config_.seed);
}

Encoder::Encoder(EncodingConfig config, std::vector<double> rff_frequencies)
    : config_(config), rff_(std::move(rff_frequencies)) {
  config_.validate();
  if (config_.kind == EncodingKind::kRff && rff_.size() != static_cast<std::size_t>(config_.frequencies)) {
    throw ContractError("stored RFF frequency count does not match L");
  }
}

void Encoder::encode_into(double t, double* out) const {
  switch (config_.kind) {
    case EncodingKind::kIdentity:
      out[0] = t;
      return;
    case EncodingKind::kNeff:
      for (int k = 0; k < config_.frequencies; ++k) {
        const double arg = std::ldexp(kPi, k) * t;
        out[2 * k] = std::sin(arg);
        out[2 * k + 1] = std::cos(arg);
      }
      return;
    case EncodingKind::kRff:
      for (std::size_t i = 0; i < rff_.size(); ++i) {
        const double arg = kTwoPi * rff_[i] * t;
        out[2 * i] = std::cos(arg);
        out[2 * i + 1] = std::sin(arg);
      }
      return;
  }
}

void Encoder::derivative_into(double t, double* out) const {
  switch (config_.kind) {
    case EncodingKind::kIdentity:
      out[0] = 1.0;
      return;
    case EncodingKind::kNeff:
      for (int k = 0; k < config_.frequencies; ++k) {
        const double w = std::ldexp(kPi, k);
        out[2 * k] = w * std::cos(w * t);
        out[2 * k + 1] = -w * std::sin(w * t);
      }
      return;
    case EncodingKind::kRff:
      for (std::size_t i = 0; i < rff_.size(); ++i) {
        const double w = kTwoPi * rff_[i];
        out[2 * i] = -w * std::sin(w * t);
        out[2 * i + 1] = w * std::cos(w * t);
      }
      return;
  }
}

std::vector<double> Encoder::encode(double t) const {
  std::vector<double> out(output_dim());
  encode_into(t, out.data());
  return out;
}

core::Tensor Encoder::encode_batch(std::span<const double> t) const {
  const std::size_t dim = output_dim();
  core::Tensor out = core::Tensor::matrix(t.size(), dim);
  for (std::size_t r = 0; r < t.size(); ++r) encode_into(t[r], out.data() + r * dim);
  return out;
}

core::Var Encoder::record(core::Tape& tape, core::Var t) const {
  if (config_.kind == EncodingKind::kIdentity) return t;
  return tape.custom(std::make_shared<Op>(*this), {t});
}

nlohmann::json to_json(const EncodingConfig& config) {
  nlohmann::json j{{"kind", to_string(config.kind)}};
  if (config.kind != EncodingKind::kIdentity) j["L"] = config.frequencies;
  if (config.kind == EncodingKind::kRff) {
    j["sigma"] = config.sigma;
    j["seed"] = config.seed;
  }
  return j;
}

EncodingConfig encoding_from_json(const nlohmann::json& doc) {
  EncodingConfig c;
  if (doc.is_string()) {
    c.kind = encoding_from_string(doc.get<std::string>());
  } else {
    c.kind = encoding_from_string(doc.value("kind", std::string("identity")));
    c.frequencies = doc.value("L", c.kind == EncodingKind::kRff ? 32 : 12);
    c.sigma = doc.value("sigma", 10.0);
    c.seed = doc.value("seed", std::uint64_t{0});
  }
  if (doc.is_string() && c.kind == EncodingKind::kRff) c.frequencies = 32;
  c.validate();
  return c;
}

}  // namespace neaf::encodings
