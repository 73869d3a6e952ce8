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
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/audio/clip.hpp"
#include "neaf/audio/dataset.hpp"
#include "neaf/core/error.hpp"
#include "neaf/metrics.hpp"
#include "neaf/models/config.hpp"
#include "neaf/models/params.hpp"

namespace neaf::trainer {

enum class Schedule { kCosine, kConstant };

std::string_view to_string(Schedule schedule) noexcept;
Schedule schedule_from_string(std::string_view name);

struct TrainConfig {
  std::int64_t epochs = 1000;
  double lr0 = 1e-4;
  std::size_t batch_size = 16384;
  /// Seeds both the parameter draw and the batch shuffle.
  std::uint64_t seed = 0;
  Schedule schedule = Schedule::kCosine;
  /// Progress callback period in epochs; 0 disables it.
  std::int64_t eval_every = 0;
  /// Rows per forward/backward pass. Gradients of a batch are accumulated
  /// over chunks, so this bounds memory without changing the update.
  std::size_t chunk_rows = 1024;
  /// Loss above this aborts the run as diverged.
  double divergence_threshold = 1e6;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_from_json(const nlohmann::json& doc);

/// Raised when the batch loss exceeds the divergence threshold.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

struct EpochStats {
  /// 1-based.
  std::int64_t epoch = 0;
  double mean_loss = 0.0;
  /// Learning rate of the epoch's last step.
  double lr = 0.0;
};

struct FitResult {
  models::ModelParams params;
  std::vector<double> loss_history;
  std::vector<EpochStats> epochs;
  double seconds = 0.0;
};

using ProgressFn = std::function<void(const EpochStats&)>;

/// Adam on the batch-mean squared error over seeded shuffled batches.
FitResult fit(const models::ModelSpec& spec, models::ModelParams initial, const audio::CoordinateDataset& data,
              const TrainConfig& config, const ProgressFn& progress = {});
/// Same, starting from init_params(spec, config.seed).
FitResult fit(const models::ModelSpec& spec, const audio::CoordinateDataset& data, const TrainConfig& config,
              const ProgressFn& progress = {});

/// Reconstructs the clip at its own coordinates and scores it.
metrics::MetricsReport evaluate(const models::ModelParams& params, const models::ModelSpec& spec,
                                const audio::AudioClip& clip, const metrics::MetricSettings& settings = {});

/// f on a uniform grid of floor(duration * rate) points spanning [0, 1]. Not clamped.
audio::AudioClip render(const models::ModelParams& params, const models::ModelSpec& spec, std::uint32_t sample_rate,
                        double duration);

/// Writes "epoch,mean_loss,lr" rows.
void write_loss_csv(const std::vector<EpochStats>& epochs, const std::filesystem::path& path);

}  // namespace neaf::trainer
