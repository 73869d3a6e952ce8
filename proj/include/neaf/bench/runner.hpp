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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "neaf/bench/config.hpp"
#include "neaf/bench/leaderboard.hpp"
#include "neaf/metrics.hpp"
#include "neaf/trainer.hpp"

namespace neaf::bench {

struct RunOutcome {
  LeaderboardRow row;
  std::optional<metrics::MetricsReport> report;
  std::optional<trainer::FitResult> fit;
};

/// Fits and scores one experiment. Divergence and other failures become row
/// statuses; nothing is thrown. Artifacts are written when output_dir is set.
RunOutcome run_experiment(const ExperimentConfig& config);

using RowCallback = std::function<void(std::size_t index, const LeaderboardRow& row)>;

/// Runs every config on a pool of `jobs` workers (0 = hardware concurrency)
/// and returns rows in sorted order. The result does not depend on `jobs`.
std::vector<LeaderboardRow> run_benchmark(const std::vector<ExperimentConfig>& matrix, std::size_t jobs = 1,
                                          const RowCallback& on_row = {});

/// One row per value, in value order. Unknown parameters throw before any run.
std::vector<LeaderboardRow> run_sweep(const ExperimentConfig& base, std::string_view parameter,
                                      const std::vector<std::string>& values, std::size_t jobs = 1,
                                      const RowCallback& on_row = {});

}  // namespace neaf::bench
