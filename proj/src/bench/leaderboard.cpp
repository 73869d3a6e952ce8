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

#include "neaf/bench/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "neaf/core/error.hpp"

namespace neaf::bench {

namespace {

constexpr std::string_view kColumns[] = {"activation", "encoding", "family", "params", "snr_db",
                                         "lsd",        "status",   "hyper",  "message"};

std::string format_metric(const std::optional<double>& v) {
  if (!v) return "-";
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", kMetricDecimals, *v);
  return buf;
}

std::optional<double> parse_metric(const std::string& s) {
  if (s == "-" || s.empty()) return std::nullopt;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ContractError("bad metric value '" + s + "'");
  return v;
}

nlohmann::json metric_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

std::optional<double> metric_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) return parse_metric(j.get<std::string>());
  return j.get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> cells(const LeaderboardRow& r) {
  return {r.activation,        r.encoding,         r.family,
          std::to_string(r.params), format_metric(r.snr_db), format_metric(r.lsd),
          std::string(to_string(r.status)), r.hyper, r.message};
}

std::string settings_line(const metrics::MetricSettings& s) {
  std::ostringstream out;
  out << "snr=" << (s.snr_convention == metrics::SnrConvention::kLiteral ? "literal-20log10" : "power-10log10")
      << " lsd_frame=" << s.frame_length << " lsd_hop=" << s.hop << " lsd_window=hann"
      << " lsd_log=" << (s.log_base == metrics::LogBase::kNatural ? "e" : "10") << " lsd_floor=" << s.floor;
  return out.str();
}

metrics::MetricSettings parse_settings_line(const std::string& line) {
  metrics::MetricSettings s;
  std::istringstream in(line);
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "snr") {
      s.snr_convention = value == "power-10log10" ? metrics::SnrConvention::kPower : metrics::SnrConvention::kLiteral;
    } else if (key == "lsd_frame") {
      s.frame_length = std::stoul(value);
    } else if (key == "lsd_hop") {
      s.hop = std::stoul(value);
    } else if (key == "lsd_log") {
      s.log_base = value == "10" ? metrics::LogBase::kTen : metrics::LogBase::kNatural;
    } else if (key == "lsd_floor") {
      s.floor = std::stod(value);
    }
  }
  return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

}  // namespace

std::string_view to_string(RowStatus status) noexcept {
  switch (status) {
    case RowStatus::kOk: return "ok";
    case RowStatus::kDiverged: return "diverged";
    case RowStatus::kError: return "error";
  }
  return "?";
}

RowStatus status_from_string(std::string_view name) {
  if (name == "ok") return RowStatus::kOk;
  if (name == "diverged") return RowStatus::kDiverged;
  if (name == "error") return RowStatus::kError;
  throw ContractError("unknown row status '" + std::string(name) + "'");
}

ReportFormat format_from_string(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown" || name == "md") return ReportFormat::kMarkdown;
  throw ContractError("unknown report format '" + std::string(name) + "' (expected csv, json or markdown)");
}

std::string_view extension(ReportFormat format) noexcept {
  switch (format) {
    case ReportFormat::kCsv: return ".csv";
    case ReportFormat::kJson: return ".json";
    case ReportFormat::kMarkdown: return ".md";
  }
  return "";
}

double round_metric(double v) {
  if (!std::isfinite(v)) return v;
  const double scale = std::pow(10.0, kMetricDecimals);
  return std::round(v * scale) / scale;
}

void sort_rows(std::vector<LeaderboardRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const LeaderboardRow& a, const LeaderboardRow& b) {
    return std::tie(a.family, a.activation, a.encoding, a.hyper) < std::tie(b.family, b.activation, b.encoding, b.hyper);
  });
}

std::string render_report(const Leaderboard& board, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kCsv: {
      out << "# " << settings_line(board.settings) << '\n';
      for (std::size_t i = 0; i < std::size(kColumns); ++i) out << (i ? "," : "") << kColumns[i];
      out << '\n';
      for (const auto& row : board.rows) {
        const auto c = cells(row);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << csv_field(c[i]);
        out << '\n';
      }
      break;
    }
    case ReportFormat::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : board.rows) {
        rows.push_back({{"activation", r.activation},
                        {"encoding", r.encoding},
                        {"family", r.family},
                        {"params", r.params},
                        {"snr_db", metric_json(r.snr_db)},
                        {"lsd", metric_json(r.lsd)},
                        {"status", to_string(r.status)},
                        {"hyper", r.hyper},
                        {"message", r.message}});
      }
      nlohmann::json doc{{"settings", metrics::to_json(board.settings)}, {"rows", rows}};
      out << doc.dump(2) << '\n';
      break;
    }
    case ReportFormat::kMarkdown: {
      // The best SNR among ok rows of each encoding is bolded.
      std::map<std::string, double> best;
      for (const auto& r : board.rows) {
        if (r.status != RowStatus::kOk || !r.snr_db) continue;
        auto [it, fresh] = best.emplace(r.encoding, *r.snr_db);
        if (!fresh) it->second = std::max(it->second, *r.snr_db);
      }
      out << '|';
      for (auto c : kColumns) out << ' ' << c << " |";
      out << "\n|";
      for (std::size_t i = 0; i < std::size(kColumns); ++i) out << (i >= 3 && i <= 5 ? " ---: |" : " --- |");
      out << '\n';
      for (const auto& r : board.rows) {
        auto c = cells(r);
        const auto it = best.find(r.encoding);
        if (r.status == RowStatus::kOk && r.snr_db && it != best.end() && *r.snr_db == it->second) {
          c[4] = "**" + c[4] + "**";
        }
        out << '|';
        for (auto& cell : c) {
          std::string escaped;
          for (char ch : cell) escaped += ch == '|' ? std::string("\\|") : std::string(1, ch);
          out << ' ' << escaped << " |";
        }
        out << '\n';
      }
      out << "\n" << settings_line(board.settings) << '\n';
      break;
    }
  }
  return out.str();
}

void emit_report(const Leaderboard& board, ReportFormat format, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << render_report(board, format);
  if (!out) throw IoError("write failed for " + path.string());
}

Leaderboard parse_csv(std::string_view text) {
  Leaderboard board;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      board.settings = parse_settings_line(line.substr(1));
      continue;
    }
    auto f = split_csv_line(line);
    if (!header) {
      if (f.size() != std::size(kColumns) || f[0] != kColumns[0]) throw ContractError("unexpected leaderboard header");
      header = true;
      continue;
    }
    if (f.size() != std::size(kColumns)) throw ContractError("leaderboard row has " + std::to_string(f.size()) + " fields");
    LeaderboardRow r;
    r.activation = f[0];
    r.encoding = f[1];
    r.family = f[2];
    r.params = std::stoull(f[3]);
    r.snr_db = parse_metric(f[4]);
    r.lsd = parse_metric(f[5]);
    r.status = status_from_string(f[6]);
    r.hyper = f[7];
    r.message = f[8];
    board.rows.push_back(std::move(r));
  }
  if (!header) throw ContractError("leaderboard CSV has no header");
  return board;
}

Leaderboard parse_json(const nlohmann::json& doc) {
  Leaderboard board;
  if (doc.contains("settings")) board.settings = metrics::settings_from_json(doc["settings"]);
  for (const auto& j : doc.at("rows")) {
    LeaderboardRow r;
    r.activation = j.at("activation").get<std::string>();
    r.encoding = j.at("encoding").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.params = j.at("params").get<std::size_t>();
    r.snr_db = metric_from_json(j.at("snr_db"));
    r.lsd = metric_from_json(j.at("lsd"));
    r.status = status_from_string(j.at("status").get<std::string>());
    r.hyper = j.value("hyper", std::string());
    r.message = j.value("message", std::string());
    board.rows.push_back(std::move(r));
  }
  return board;
}

}  // namespace neaf::bench
