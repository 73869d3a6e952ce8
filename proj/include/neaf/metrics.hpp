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
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/core/tensor.hpp"

namespace neaf::metrics {

enum class SnrConvention {
  /// 20 log10(||y||^2 / ||y_hat - y||^2), squared norms inside 20 log10.
  kLiteral,
  /// 10 log10(||y||^2 / ||y_hat - y||^2), the usual power ratio.
  kPower,
};

enum class LogBase { kNatural, kTen };

struct MetricSettings {
  SnrConvention snr_convention = SnrConvention::kLiteral;
  std::size_t frame_length = 2048;
  std::size_t hop = 512;
  LogBase log_base = LogBase::kNatural;
  double floor = 1e-10;
};

/// Positive infinity; returned when the reconstruction is exact.
double snr_infinity() noexcept;

double snr(std::span<const double> y_hat, std::span<const double> y,
           SnrConvention convention = SnrConvention::kLiteral);

/// Periodic Hann window of length n.
std::vector<double> hann_window(std::size_t n);

/// Log power spectrogram X[frame, bin] = log(|S|^2 + floor), one-sided, K = frame/2 + 1.
/// Frames are taken at multiples of the hop without padding.
core::Tensor stft_log_power(std::span<const double> y, const MetricSettings& settings = {});

/// Mean over frames of the RMS log-spectral difference.
double lsd(std::span<const double> y_hat, std::span<const double> y, const MetricSettings& settings = {});

struct MetricsReport {
  double snr_db = 0.0;
  double lsd = 0.0;
  std::size_t param_count = 0;
  double train_seconds = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_history;
  MetricSettings settings;
};

nlohmann::json to_json(const MetricSettings& settings);
MetricSettings settings_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);

/// SNR as text: fixed decimals, "inf" for the infinity sentinel.
std::string format_snr(double snr_db, int decimals = 2);

}  // namespace neaf::metrics
