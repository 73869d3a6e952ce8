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

#include "neaf/metrics.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "neaf/core/error.hpp"

namespace neaf::metrics {

double snr_infinity() noexcept { return std::numeric_limits<double>::infinity(); }

double snr(std::span<const double> y_hat, std::span<const double> y, SnrConvention convention) {
  if (y.size() != y_hat.size()) throw ContractError("snr: length mismatch");
  if (y.empty()) throw ContractError("snr: empty signals");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    signal += y[i] * y[i];
    const double e = y_hat[i] - y[i];
    error += e * e;
  }
  if (signal == 0.0) throw ContractError("snr: reference signal is all zeros");
  if (error == 0.0) return snr_infinity();
  const double factor = convention == SnrConvention::kLiteral ? 20.0 : 10.0;
  return factor * std::log10(signal / error);
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return w;
}

core::Tensor stft_log_power(std::span<const double> y, const MetricSettings& settings) {
  const std::size_t n = settings.frame_length;
  if (n < 2) throw ContractError("stft: frame length must be >= 2");
  if (settings.hop == 0) throw ContractError("stft: hop must be >= 1");
  if (y.size() < n) {
    throw ContractError("stft: signal of " + std::to_string(y.size()) + " samples is shorter than one " +
                        std::to_string(n) + "-sample frame");
  }
  const std::size_t frames = 1 + (y.size() - n) / settings.hop;
  const std::size_t bins = n / 2 + 1;
  const std::vector<double> window = hann_window(n);
  const double log_scale = settings.log_base == LogBase::kTen ? 1.0 / std::log(10.0) : 1.0;

  core::Tensor out = core::Tensor::matrix(frames, bins);
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(n);
  std::vector<std::complex<double>> spectrum;
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * settings.hop;
    for (std::size_t i = 0; i < n; ++i) frame[i] = y[start + i] * window[i];
    fft.fwd(spectrum, frame);
    for (std::size_t k = 0; k < bins; ++k) out.at(f, k) = std::log(std::norm(spectrum[k]) + settings.floor) * log_scale;
  }
  return out;
}

double lsd(std::span<const double> y_hat, std::span<const double> y, const MetricSettings& settings) {
  if (y.size() != y_hat.size()) throw ContractError("lsd: length mismatch");
  const core::Tensor x = stft_log_power(y, settings);
  const core::Tensor x_hat = stft_log_power(y_hat, settings);
  double total = 0.0;
  for (std::size_t f = 0; f < x.rows(); ++f) {
    double sq = 0.0;
    for (std::size_t k = 0; k < x.cols(); ++k) {
      const double d = x.at(f, k) - x_hat.at(f, k);
      sq += d * d;
    }
    total += std::sqrt(sq / static_cast<double>(x.cols()));
  }
  return total / static_cast<double>(x.rows());
}

std::string format_snr(double snr_db, int decimals) {
  if (std::isinf(snr_db)) return snr_db > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, snr_db);
  return buf;
}

namespace {

nlohmann::json encode_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double decode_double(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

}  // namespace

nlohmann::json to_json(const MetricSettings& s) {
  return {{"snr_convention", s.snr_convention == SnrConvention::kLiteral ? "literal-20log10" : "power-10log10"},
          {"lsd_frame_length", s.frame_length},
          {"lsd_hop", s.hop},
          {"lsd_window", "hann"},
          {"lsd_log_base", s.log_base == LogBase::kNatural ? "e" : "10"},
          {"lsd_floor", s.floor}};
}

MetricSettings settings_from_json(const nlohmann::json& doc) {
  MetricSettings s;
  const auto conv = doc.value("snr_convention", std::string("literal-20log10"));
  if (conv == "literal-20log10" || conv == "literal") {
    s.snr_convention = SnrConvention::kLiteral;
  } else if (conv == "power-10log10" || conv == "power") {
    s.snr_convention = SnrConvention::kPower;
  } else {
    throw ContractError("unknown snr convention '" + conv + "'");
  }
  s.frame_length = doc.value("lsd_frame_length", s.frame_length);
  s.hop = doc.value("lsd_hop", s.hop);
  const auto base = doc.value("lsd_log_base", std::string("e"));
  if (base != "e" && base != "10") throw ContractError("lsd log base must be 'e' or '10'");
  s.log_base = base == "e" ? LogBase::kNatural : LogBase::kTen;
  s.floor = doc.value("lsd_floor", s.floor);
  return s;
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json history = nlohmann::json::array();
  for (double v : r.loss_history) history.push_back(encode_double(v));
  return {{"snr_db", encode_double(r.snr_db)},
          {"lsd", encode_double(r.lsd)},
          {"param_count", r.param_count},
          {"train_seconds", r.train_seconds},
          {"final_loss", encode_double(r.final_loss)},
          {"loss_history", history},
          {"settings", to_json(r.settings)}};
}

MetricsReport report_from_json(const nlohmann::json& doc) {
  MetricsReport r;
  r.snr_db = decode_double(doc.at("snr_db"));
  r.lsd = decode_double(doc.at("lsd"));
  r.param_count = doc.at("param_count").get<std::size_t>();
  r.train_seconds = doc.value("train_seconds", 0.0);
  r.final_loss = decode_double(doc.at("final_loss"));
  for (const auto& v : doc.value("loss_history", nlohmann::json::array())) r.loss_history.push_back(decode_double(v));
  if (doc.contains("settings")) r.settings = settings_from_json(doc["settings"]);
  return r;
}

}  // namespace neaf::metrics
