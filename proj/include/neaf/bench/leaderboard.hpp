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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/metrics.hpp"

namespace neaf::bench {

enum class RowStatus { kOk, kDiverged, kError };

std::string_view to_string(RowStatus status) noexcept;
RowStatus status_from_string(std::string_view name);

/// One benchmark result. Metric values are absent unless status is ok.
struct LeaderboardRow {
  std::string activation;
  std::string encoding;
  std::string family;
  std::size_t params = 0;
  std::optional<double> snr_db;
  std::optional<double> lsd;
  RowStatus status = RowStatus::kOk;
  std::string hyper;
  std::string message;

  friend bool operator==(const LeaderboardRow&, const LeaderboardRow&) = default;
};

struct Leaderboard {
  metrics::MetricSettings settings;
  std::vector<LeaderboardRow> rows;
};

enum class ReportFormat { kCsv, kJson, kMarkdown };

ReportFormat format_from_string(std::string_view name);
std::string_view extension(ReportFormat format) noexcept;

/// Metric values are kept at this many decimals so every format round-trips.
inline constexpr int kMetricDecimals = 4;
double round_metric(double v);

/// Stable order by (family, activation, encoding, hyper).
void sort_rows(std::vector<LeaderboardRow>& rows);

/// Column order: activation, encoding, family, params, snr_db, lsd, status, hyper, message.
std::string render_report(const Leaderboard& board, ReportFormat format);
void emit_report(const Leaderboard& board, ReportFormat format, const std::filesystem::path& path);

Leaderboard parse_csv(std::string_view text);
Leaderboard parse_json(const nlohmann::json& doc);

}  // namespace neaf::bench
