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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neaf/audio/dataset.hpp"
#include "neaf/audio/wav.hpp"
#include "neaf/bench/config.hpp"
#include "neaf/bench/gradcheck.hpp"
#include "neaf/bench/leaderboard.hpp"
#include "neaf/bench/runner.hpp"
#include "neaf/core/error.hpp"
#include "neaf/models/checkpoint.hpp"
#include "neaf/models/model.hpp"
#include "neaf/trainer.hpp"

namespace {

using namespace neaf;

struct Common {
  std::string snr_convention;
  bool peak_normalize = false;
};

void apply_common(const Common& common, bench::ExperimentConfig& config) {
  if (!common.snr_convention.empty()) {
    config.metrics.snr_convention = common.snr_convention == "power" ? metrics::SnrConvention::kPower
                                                                      : metrics::SnrConvention::kLiteral;
  }
  if (common.peak_normalize) config.peak_normalize = true;
  if (const auto seed = bench::seed_from_env()) bench::apply_seed(config, *seed);
}

metrics::MetricSettings settings_for(const Common& common) {
  metrics::MetricSettings s;
  if (common.snr_convention == "power") s.snr_convention = metrics::SnrConvention::kPower;
  return s;
}

void print_row(std::size_t, const bench::LeaderboardRow& row) {
  std::fprintf(stderr, "[%s] %s/%s/%s snr=%s %s\n", std::string(bench::to_string(row.status)).c_str(),
               row.family.c_str(), row.encoding.c_str(), row.activation.c_str(),
               row.snr_db ? metrics::format_snr(*row.snr_db).c_str() : "-", row.message.c_str());
}

int write_reports(const bench::Leaderboard& board, const std::filesystem::path& dir, const std::string& stem) {
  for (auto format : {bench::ReportFormat::kCsv, bench::ReportFormat::kJson, bench::ReportFormat::kMarkdown}) {
    bench::emit_report(board, format, dir / (stem + std::string(bench::extension(format))));
  }
  std::cout << bench::render_report(board, bench::ReportFormat::kMarkdown);
  for (const auto& row : board.rows) {
    if (row.status == bench::RowStatus::kError) return 1;
  }
  return 0;
}

int cmd_fit(const std::string& path, const Common& common) {
  auto config = bench::load_experiment(path);
  apply_common(common, config);
  const auto clip = bench::load_input(config);
  auto fit = trainer::fit(config.model, audio::to_dataset(clip), config.train, [](const trainer::EpochStats& s) {
    std::fprintf(stderr, "epoch %lld loss %.6g lr %.3g\n", static_cast<long long>(s.epoch), s.mean_loss, s.lr);
  });
  auto report = trainer::evaluate(fit.params, config.model, clip, config.metrics);
  report.train_seconds = fit.seconds;
  report.final_loss = fit.loss_history.back();
  report.loss_history = fit.loss_history;
  if (!config.output_dir.empty()) {
    std::filesystem::create_directories(config.output_dir);
    models::save_checkpoint(config.output_dir / "model.neaf",
                            {config.model, fit.params, {{"experiment", bench::to_json(config)}}});
    trainer::write_loss_csv(fit.epochs, config.output_dir / "loss.csv");
    std::ofstream(config.output_dir / "metrics.json") << metrics::to_json(report).dump(2) << '\n';
  }
  std::cout << metrics::to_json(report).dump(2) << '\n';
  return 0;
}

int cmd_eval(const std::string& checkpoint, const std::string& wav, const Common& common) {
  const auto ckpt = models::load_checkpoint(checkpoint);
  auto clip = audio::load_wav(wav);
  if (common.peak_normalize) clip = audio::normalize_peak(std::move(clip));
  auto report = trainer::evaluate(ckpt.params, ckpt.spec, clip, settings_for(common));
  std::cout << metrics::to_json(report).dump(2) << '\n';
  return 0;
}

int cmd_render(const std::string& checkpoint, std::uint32_t rate, double duration, const std::string& out,
               const std::string& encoding) {
  const auto ckpt = models::load_checkpoint(checkpoint);
  const auto clip = trainer::render(ckpt.params, ckpt.spec, rate, duration);
  audio::save_wav(clip, out, encoding == "pcm16" ? audio::WavEncoding::kPcm16 : audio::WavEncoding::kFloat32);
  std::fprintf(stderr, "wrote %zu samples to %s\n", clip.samples.size(), out.c_str());
  return 0;
}

int cmd_bench(const std::string& matrix_path, bool desk_scale, std::size_t jobs, const std::string& out_dir,
              const Common& common) {
  auto matrix = bench::load_matrix(matrix_path);
  for (auto& config : matrix) {
    apply_common(common, config);
    if (desk_scale) bench::apply_desk_scale(config);
  }
  bench::Leaderboard board;
  if (!matrix.empty()) board.settings = matrix.front().metrics;
  board.rows = bench::run_benchmark(matrix, jobs, print_row);
  return write_reports(board, out_dir, "leaderboard");
}

int cmd_sweep(const std::string& path, std::string param, std::vector<std::string> values, std::size_t jobs,
              const std::string& out_dir, const Common& common) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const auto doc = nlohmann::json::parse(in);
  // A sweep file may wrap the experiment as {"base": ..., "param": ..., "values": [...]}.
  const bool wrapped = doc.contains("base");
  auto base = bench::experiment_from_json(wrapped ? doc["base"] : doc, std::filesystem::path(path).parent_path());
  if (param.empty() && wrapped) param = doc.value("param", std::string());
  if (values.empty() && wrapped && doc.contains("values")) {
    for (const auto& v : doc["values"]) values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  if (param.empty()) throw ContractError("sweep needs --param");
  apply_common(common, base);
  bench::Leaderboard board;
  board.settings = base.metrics;
  board.rows = bench::run_sweep(base, param, values, jobs, print_row);
  return write_reports(board, out_dir, "sweep-" + param);
}

int cmd_gradcheck(const std::string& family, std::uint64_t seed) {
  std::vector<bench::GradCheckCase> cases;
  auto append = [&cases](std::vector<bench::GradCheckCase> more) {
    cases.insert(cases.end(), more.begin(), more.end());
  };
  if (family.empty() || family == "mlp") {
    append(bench::gradcheck_activations(seed));
    append(bench::gradcheck_encodings(seed));
  }
  for (auto f : {models::ModelFamily::kMlp, models::ModelFamily::kFourierKan, models::ModelFamily::kBsplineKan}) {
    if (family.empty() || family == models::to_string(f)) append(bench::gradcheck_family(f, seed));
  }
  if (cases.empty()) throw ContractError("unknown family '" + family + "'");
  int failures = 0;
  for (const auto& c : cases) {
    const bool ok = c.result.checked > 0 && c.result.max_relative_error < 1e-5;
    failures += ok ? 0 : 1;
    std::printf("%-4s %-32s max_rel_err=%.3e checked=%zu skipped=%zu\n", ok ? "ok" : "FAIL", c.label.c_str(),
                c.result.max_relative_error, c.result.checked, c.result.skipped);
  }
  return failures == 0 ? 0 : 1;
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural amplitude fields: fit, score and benchmark continuous audio representations"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--snr-convention", common.snr_convention, "literal (20 log10 of squared norms) or power")
      ->check(CLI::IsMember({"literal", "power"}));
  app.add_flag("--peak-normalize", common.peak_normalize, "Scale input clips to unit peak");

  std::string config_path, checkpoint, wav, out = "render.wav", out_dir = ".", family, param, values, wav_encoding = "float32";
  std::uint32_t rate = 16000;
  double duration = 1.0;
  bool desk_scale = false;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  auto* fit = app.add_subcommand("fit", "Fit one experiment config");
  fit->add_option("config", config_path)->required()->check(CLI::ExistingFile);

  auto* eval = app.add_subcommand("eval", "Score a checkpoint against a WAV file");
  eval->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("wav", wav)->required()->check(CLI::ExistingFile);

  auto* render = app.add_subcommand("render", "Sample a checkpoint at any rate");
  render->add_option("checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  render->add_option("--rate", rate, "Sample rate in Hz")->check(CLI::PositiveNumber);
  render->add_option("--duration", duration, "Duration in seconds")->check(CLI::PositiveNumber);
  render->add_option("-o,--output", out, "Output WAV path");
  render->add_option("--encoding", wav_encoding)->check(CLI::IsMember({"float32", "pcm16"}));

  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark matrix and write leaderboards");
  bench_cmd->add_option("matrix", config_path)->required()->check(CLI::ExistingFile);
  bench_cmd->add_flag("--desk-scale", desk_scale, "2 s clips, 300 epochs");
  bench_cmd->add_option("--jobs", jobs, "Parallel runs (0 = all cores)");
  bench_cmd->add_option("--out", out_dir, "Directory for leaderboard files");

  auto* sweep = app.add_subcommand("sweep", "Vary one hyperparameter of a config");
  sweep->add_option("config", config_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "L, sigma, omega, a or omega_schedule");
  sweep->add_option("--values", values, "Comma-separated values; omega schedules use ':' (64:5:3)");
  sweep->add_option("--jobs", jobs, "Parallel runs (0 = all cores)");
  sweep->add_option("--out", out_dir, "Directory for leaderboard files");

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of every differentiable piece");
  gradcheck->add_option("--family", family)->check(CLI::IsMember({"mlp", "fourier-kan", "bspline-kan"}));
  gradcheck->add_option("--seed", seed);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*fit) return cmd_fit(config_path, common);
    if (*eval) return cmd_eval(checkpoint, wav, common);
    if (*render) return cmd_render(checkpoint, rate, duration, out, wav_encoding);
    if (*bench_cmd) return cmd_bench(config_path, desk_scale, jobs, out_dir, common);
    if (*sweep) return cmd_sweep(config_path, param, split_values(values), jobs, out_dir, common);
    if (*gradcheck) return cmd_gradcheck(family, seed);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
