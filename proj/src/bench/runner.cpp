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

#include "neaf/bench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "neaf/core/error.hpp"
#include "neaf/models/checkpoint.hpp"
#include "neaf/models/model.hpp"

namespace neaf::bench {

namespace {

LeaderboardRow describe(const ExperimentConfig& config) {
  LeaderboardRow row;
  row.family = std::string(models::to_string(models::family_of(config.model)));
  if (const auto* mlp = std::get_if<models::MLPConfig>(&config.model)) {
    row.activation = std::string(activations::to_string(mlp->activation.kind));
    row.encoding = std::string(encodings::to_string(mlp->encoding.kind));
  } else {
    row.activation = "none";
    row.encoding = "identity";
  }
  row.hyper = describe_hyper(config.model);
  row.params = models::param_count(config.model);
  return row;
}

void write_artifacts(const ExperimentConfig& config, const trainer::FitResult& fit,
                     const metrics::MetricsReport& report) {
  std::filesystem::create_directories(config.output_dir);
  models::Checkpoint ckpt{config.model, fit.params, {{"experiment", to_json(config)}, {"final_loss", report.final_loss}}};
  models::save_checkpoint(config.output_dir / "model.neaf", ckpt);
  trainer::write_loss_csv(fit.epochs, config.output_dir / "loss.csv");
  std::ofstream out(config.output_dir / "metrics.json");
  if (!out) throw IoError("cannot write metrics to " + config.output_dir.string());
  out << metrics::to_json(report).dump(2) << '\n';
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config) {
  RunOutcome outcome;
  try {
    outcome.row = describe(config);
  } catch (const std::exception& e) {
    outcome.row.status = RowStatus::kError;
    outcome.row.message = e.what();
    return outcome;
  }
  try {
    config.validate();
    const audio::AudioClip clip = load_input(config);
    const auto data = audio::to_dataset(clip);
    auto fit = trainer::fit(config.model, data, config.train);
    auto report = trainer::evaluate(fit.params, config.model, clip, config.metrics);
    report.train_seconds = fit.seconds;
    report.final_loss = fit.loss_history.empty() ? 0.0 : fit.loss_history.back();
    report.loss_history = fit.loss_history;
    outcome.row.snr_db = round_metric(report.snr_db);
    outcome.row.lsd = round_metric(report.lsd);
    outcome.row.status = RowStatus::kOk;
    if (!config.output_dir.empty()) write_artifacts(config, fit, report);
    outcome.report = std::move(report);
    outcome.fit = std::move(fit);
  } catch (const NumericError& e) {
    outcome.row.status = RowStatus::kDiverged;
    outcome.row.snr_db.reset();
    outcome.row.lsd.reset();
    outcome.row.message = e.what();
  } catch (const std::exception& e) {
    outcome.row.status = RowStatus::kError;
    outcome.row.snr_db.reset();
    outcome.row.lsd.reset();
    outcome.row.message = e.what();
  }
  return outcome;
}

namespace {

std::vector<LeaderboardRow> run_all(const std::vector<ExperimentConfig>& configs, std::size_t jobs,
                                    const RowCallback& on_row) {
  std::vector<LeaderboardRow> rows(configs.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(configs.size(), 1));
  std::atomic<std::size_t> next{0};
  std::mutex report_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      rows[i] = run_experiment(configs[i]).row;
      if (on_row) {
        std::lock_guard lock(report_mutex);
        on_row(i, rows[i]);
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace

std::vector<LeaderboardRow> run_benchmark(const std::vector<ExperimentConfig>& matrix, std::size_t jobs,
                                          const RowCallback& on_row) {
  auto rows = run_all(matrix, jobs, on_row);
  sort_rows(rows);
  return rows;
}

std::vector<LeaderboardRow> run_sweep(const ExperimentConfig& base, std::string_view parameter,
                                      const std::vector<std::string>& values, std::size_t jobs,
                                      const RowCallback& on_row) {
  if (std::find(sweep_parameters().begin(), sweep_parameters().end(), parameter) == sweep_parameters().end()) {
    with_parameter(base, parameter, "");  // throws with the list of valid names
  }
  std::vector<ExperimentConfig> configs;
  std::vector<std::optional<LeaderboardRow>> invalid(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    try {
      configs.push_back(with_parameter(base, parameter, values[i]));
    } catch (const std::exception& e) {
      LeaderboardRow row = describe(base);
      row.status = RowStatus::kError;
      row.hyper = std::string(parameter) + "=" + values[i];
      row.message = e.what();
      invalid[i] = row;
      configs.push_back(base);
    }
  }
  std::vector<ExperimentConfig> runnable;
  std::vector<std::size_t> slot;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!invalid[i]) {
      runnable.push_back(configs[i]);
      slot.push_back(i);
    }
  }
  const auto ran = run_all(runnable, jobs, on_row);
  std::vector<LeaderboardRow> rows(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (invalid[i]) rows[i] = *invalid[i];
  }
  for (std::size_t k = 0; k < ran.size(); ++k) rows[slot[k]] = ran[k];
  return rows;
}

}  // namespace neaf::bench
