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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "neaf/audio/clip.hpp"
#include "neaf/audio/synth.hpp"
#include "neaf/metrics.hpp"
#include "neaf/models/config.hpp"
#include "neaf/trainer.hpp"

namespace neaf::bench {

/// Where an experiment's audio comes from. Exactly one source is active.
struct InputSource {
  enum class Kind { kWav, kSynth, kMusic };
  Kind kind = Kind::kMusic;
  std::filesystem::path wav;
  audio::SynthSpec synth;
  audio::MusicSpec music;
};

struct ExperimentConfig {
  std::string name;
  InputSource input;
  /// Rescale the clip to unit peak before fitting.
  bool peak_normalize = false;
  /// Keep only the first max_duration seconds; 0 keeps the whole clip.
  double max_duration = 0.0;
  models::ModelSpec model;
  trainer::TrainConfig train;
  metrics::MetricSettings metrics;
  /// Artifacts (checkpoint, loss CSV, metrics JSON) go here when non-empty.
  std::filesystem::path output_dir;

  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Relative WAV paths are resolved against base_dir.
ExperimentConfig experiment_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// Reads or synthesizes the clip, then applies peak normalization and truncation.
audio::AudioClip load_input(const ExperimentConfig& config);

/// NEAF_SEED as an integer, if set. Throws on a malformed value.
std::optional<std::uint64_t> seed_from_env();
/// Replaces the training seed and the RFF sampling seed.
void apply_seed(ExperimentConfig& config, std::uint64_t seed);
/// 2 s clip, 300 epochs.
void apply_desk_scale(ExperimentConfig& config);

/// Expands a matrix document into experiments.
///
/// {"base": {...}, "grid": [{"activations": [...] | "all", "encodings": [...], "model": {...}}],
///  "experiments": [{...}]}. Every grid cell and explicit experiment is a JSON
/// merge patch applied to base.
std::vector<ExperimentConfig> matrix_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
std::vector<ExperimentConfig> load_matrix(const std::filesystem::path& path);

/// Names accepted by run_sweep.
std::span<const std::string_view> sweep_parameters() noexcept;
/// Copy of base with one parameter set from its textual value. Omega schedules
/// are written with ':' separators, e.g. "64:5:3".
ExperimentConfig with_parameter(ExperimentConfig base, std::string_view name, std::string_view value);

/// Short "key=value;..." summary of the settings that distinguish rows.
std::string describe_hyper(const models::ModelSpec& spec);

}  // namespace neaf::bench
