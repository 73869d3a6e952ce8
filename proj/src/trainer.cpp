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

#include "neaf/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "neaf/core/adam.hpp"
#include "neaf/core/schedule.hpp"
#include "neaf/core/tape.hpp"
#include "neaf/models/model.hpp"

namespace neaf::trainer {

std::string_view to_string(Schedule schedule) noexcept {
  return schedule == Schedule::kCosine ? "cosine" : "constant";
}

Schedule schedule_from_string(std::string_view name) {
  if (name == "cosine") return Schedule::kCosine;
  if (name == "constant") return Schedule::kConstant;
  throw ContractError("unknown schedule '" + std::string(name) + "' (expected cosine or constant)");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ContractError("train: epochs must be >= 1");
  if (!(lr0 >= 0.0) || !std::isfinite(lr0)) throw ContractError("train: lr0 must be finite and >= 0");
  if (batch_size < 1) throw ContractError("train: batch_size must be >= 1");
  if (chunk_rows < 1) throw ContractError("train: chunk_rows must be >= 1");
  if (eval_every < 0) throw ContractError("train: eval_every must be >= 0");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},         {"lr0", c.lr0},
          {"batch_size", c.batch_size}, {"seed", c.seed},
          {"schedule", to_string(c.schedule)}, {"eval_every", c.eval_every},
          {"chunk_rows", c.chunk_rows}};
}

TrainConfig train_from_json(const nlohmann::json& doc) {
  TrainConfig c;
  c.epochs = doc.value("epochs", c.epochs);
  c.lr0 = doc.value("lr0", c.lr0);
  c.batch_size = doc.value("batch_size", c.batch_size);
  c.seed = doc.value("seed", c.seed);
  c.schedule = schedule_from_string(doc.value("schedule", std::string("cosine")));
  c.eval_every = doc.value("eval_every", c.eval_every);
  c.chunk_rows = doc.value("chunk_rows", c.chunk_rows);
  c.validate();
  return c;
}

namespace {

// Training allocates and frees the same large buffers every chunk. Keeping
// freed memory in the heap instead of returning it to the OS avoids paying
// page faults on every allocation.
void keep_freed_memory() {
#if defined(__GLIBC__)
  static std::once_flag once;
  std::call_once(once, [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
  });
#endif
}

// 1-based, as printed to users.
std::string where(std::int64_t epoch, std::size_t batch) {
  return "epoch " + std::to_string(epoch + 1) + ", batch " + std::to_string(batch + 1);
}

}  // namespace

FitResult fit(const models::ModelSpec& spec, models::ModelParams params, const audio::CoordinateDataset& data,
              const TrainConfig& config, const ProgressFn& progress) {
  config.validate();
  models::validate(spec);
  models::check_params(spec, params);
  keep_freed_memory();
  if (data.size() == 0) throw ContractError("fit: empty dataset");
  if (data.targets.size() != data.coords.size()) throw ContractError("fit: coords/targets length mismatch");

  const auto start = std::chrono::steady_clock::now();
  auto& tensors = params.tensors();
  std::vector<std::size_t> trainable;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i].trainable) {
      trainable.push_back(i);
      names.push_back(tensors[i].name);
    }
  }
  std::vector<core::Tensor> values;
  for (std::size_t i : trainable) values.push_back(tensors[i].value);
  core::AdamState adam(values);

  const std::size_t batches_per_epoch = (data.size() + config.batch_size - 1) / config.batch_size;
  const std::int64_t total_steps = config.epochs * static_cast<std::int64_t>(batches_per_epoch);
  std::int64_t step = 0;

  FitResult result;
  std::vector<core::Tensor> grads;
  for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    const auto batches = audio::batch_iter(data.size(), config.batch_size, config.seed, static_cast<std::uint64_t>(epoch));
    double loss_sum = 0.0;
    double lr = config.lr0;
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const auto& batch = batches[b];
      const double inv_batch = 1.0 / static_cast<double>(batch.size());
      grads.clear();
      for (std::size_t i : trainable) grads.push_back(core::Tensor::like(tensors[i].value));
      double loss = 0.0;
      for (std::size_t lo = 0; lo < batch.size(); lo += config.chunk_rows) {
        const std::size_t hi = std::min(batch.size(), lo + config.chunk_rows);
        core::Tensor t = core::Tensor::matrix(hi - lo, 1);
        core::Tensor y = core::Tensor::matrix(hi - lo, 1);
        for (std::size_t r = lo; r < hi; ++r) {
          t[r - lo] = data.coords[batch[r]];
          y[r - lo] = data.targets[batch[r]];
        }
        core::Tape tape;
        const auto bound = models::bind(tape, params);
        const core::Var tv = tape.constant(std::move(t));
        const core::Var pred = models::record_forward(tape, spec, params, bound, tv);
        const core::Var err = tape.sub(pred, tape.constant(std::move(y)));
        const core::Var chunk_loss = tape.scale(tape.sum(tape.mul(err, err)), inv_batch);
        loss += tape.value(chunk_loss).item();
        const auto g = tape.backward(chunk_loss);
        for (std::size_t k = 0; k < trainable.size(); ++k) {
          if (const core::Tensor* gk = g.find(bound.vars[trainable[k]])) {
            grads[k].matrix() += gk->matrix();
          }
        }
      }
      if (!std::isfinite(loss)) throw NumericError("non-finite loss at " + where(epoch, b));
      if (loss > config.divergence_threshold) {
        throw DivergenceError("loss " + std::to_string(loss) + " exceeded divergence threshold at " + where(epoch, b));
      }
      loss_sum += loss;

      lr = config.schedule == Schedule::kCosine ? core::cosine_anneal(step, total_steps, config.lr0) : config.lr0;
      for (std::size_t k = 0; k < trainable.size(); ++k) values[k] = std::move(tensors[trainable[k]].value);
      try {
        core::adam_step(values, grads, adam, lr, names);
      } catch (const NumericError& e) {
        for (std::size_t k = 0; k < trainable.size(); ++k) tensors[trainable[k]].value = std::move(values[k]);
        throw NumericError(std::string(e.what()) + " at " + where(epoch, b));
      }
      for (std::size_t k = 0; k < trainable.size(); ++k) tensors[trainable[k]].value = std::move(values[k]);
      ++step;
    }
    EpochStats stats{epoch + 1, loss_sum / static_cast<double>(batches.size()), lr};
    result.loss_history.push_back(stats.mean_loss);
    result.epochs.push_back(stats);
    if (progress && config.eval_every > 0 && ((epoch + 1) % config.eval_every == 0 || epoch + 1 == config.epochs)) {
      progress(stats);
    }
  }
  result.params = std::move(params);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

FitResult fit(const models::ModelSpec& spec, const audio::CoordinateDataset& data, const TrainConfig& config,
              const ProgressFn& progress) {
  return fit(spec, models::init_params(spec, config.seed), data, config, progress);
}

metrics::MetricsReport evaluate(const models::ModelParams& params, const models::ModelSpec& spec,
                                const audio::AudioClip& clip, const metrics::MetricSettings& settings) {
  const auto data = audio::to_dataset(clip);
  const auto y_hat = models::predict(spec, params, data.coords);
  metrics::MetricsReport report;
  report.snr_db = metrics::snr(y_hat, clip.samples, settings.snr_convention);
  report.lsd = metrics::lsd(y_hat, clip.samples, settings);
  report.param_count = params.trainable_count();
  report.settings = settings;
  return report;
}

audio::AudioClip render(const models::ModelParams& params, const models::ModelSpec& spec, std::uint32_t sample_rate,
                        double duration) {
  if (sample_rate < 1) throw ContractError("render: sample rate must be >= 1");
  if (!(duration > 0.0)) throw ContractError("render: duration must be > 0");
  const auto n = static_cast<std::size_t>(std::floor(duration * sample_rate));
  if (n == 0) throw ContractError("render: duration * rate yields no samples");
  audio::AudioClip clip;
  clip.sample_rate = sample_rate;
  clip.samples = models::predict(spec, params, audio::unit_grid(n));
  return clip;
}

void write_loss_csv(const std::vector<EpochStats>& epochs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "epoch,mean_loss,lr\n" << std::setprecision(17);
  for (const auto& e : epochs) out << e.epoch << ',' << e.mean_loss << ',' << e.lr << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace neaf::trainer
