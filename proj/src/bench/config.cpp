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

#include "neaf/bench/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "neaf/audio/wav.hpp"
#include "neaf/core/error.hpp"

namespace neaf::bench {

namespace {

nlohmann::json music_to_json(const audio::MusicSpec& m) {
  return {{"sample_rate", m.sample_rate},
          {"duration", m.duration},
          {"seed", m.seed},
          {"note_length", m.note_length},
          {"peak", m.peak}};
}

audio::MusicSpec music_from_json(const nlohmann::json& doc) {
  audio::MusicSpec m;
  m.sample_rate = doc.value("sample_rate", m.sample_rate);
  m.duration = doc.value("duration", m.duration);
  m.seed = doc.value("seed", m.seed);
  m.note_length = doc.value("note_length", m.note_length);
  m.peak = doc.value("peak", m.peak);
  return m;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ContractError(path.string() + ": " + e.what());
  }
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ContractError("value '" + s + "' for " + std::string(what) + " is not a number");
  }
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ContractError("value '" + std::string(text) + "' for " + std::string(what) + " is not an integer");
  }
  return v;
}

models::MLPConfig& require_mlp(ExperimentConfig& config, std::string_view param) {
  auto* mlp = std::get_if<models::MLPConfig>(&config.model);
  if (!mlp) throw ContractError("sweep parameter '" + std::string(param) + "' needs an mlp model");
  return *mlp;
}

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  models::validate(model);
  train.validate();
  if (max_duration < 0.0) throw ContractError("max_duration must be >= 0");
  if (input.kind == InputSource::Kind::kWav && !std::filesystem::exists(input.wav)) {
    throw IoError("input file " + input.wav.string() + " does not exist");
  }
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json input;
  switch (c.input.kind) {
    case InputSource::Kind::kWav: input["wav"] = c.input.wav.string(); break;
    case InputSource::Kind::kSynth: input["synth"] = audio::to_json(c.input.synth); break;
    case InputSource::Kind::kMusic: input["music"] = music_to_json(c.input.music); break;
  }
  nlohmann::json j{{"name", c.name},
                   {"input", input},
                   {"peak_normalize", c.peak_normalize},
                   {"max_duration", c.max_duration},
                   {"model", models::to_json(c.model)},
                   {"train", trainer::to_json(c.train)},
                   {"metrics", metrics::to_json(c.metrics)}};
  if (!c.output_dir.empty()) j["output_dir"] = c.output_dir.string();
  return j;
}

ExperimentConfig experiment_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ContractError("experiment config must be a JSON object");
  ExperimentConfig c;
  c.name = doc.value("name", std::string());
  const nlohmann::json input = doc.value("input", nlohmann::json::object());
  int sources = 0;
  for (const char* key : {"wav", "synth", "music"}) sources += input.contains(key) ? 1 : 0;
  if (sources != 1) throw ContractError("input must name exactly one of wav, synth or music");
  if (input.contains("wav")) {
    c.input.kind = InputSource::Kind::kWav;
    std::filesystem::path p = input["wav"].get<std::string>();
    c.input.wav = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  } else if (input.contains("synth")) {
    c.input.kind = InputSource::Kind::kSynth;
    c.input.synth = audio::synth_spec_from_json(input["synth"]);
  } else {
    c.input.kind = InputSource::Kind::kMusic;
    c.input.music = music_from_json(input["music"]);
  }
  c.peak_normalize = doc.value("peak_normalize", false);
  c.max_duration = doc.value("max_duration", 0.0);
  c.model = models::model_from_json(doc.value("model", nlohmann::json::object()));
  c.train = trainer::train_from_json(doc.value("train", nlohmann::json::object()));
  c.metrics = metrics::settings_from_json(doc.value("metrics", nlohmann::json::object()));
  if (doc.contains("output_dir")) {
    std::filesystem::path p = doc["output_dir"].get<std::string>();
    c.output_dir = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  }
  if (c.name.empty()) {
    const auto family = models::family_of(c.model);
    c.name = std::string(models::to_string(family));
    if (const auto* mlp = std::get_if<models::MLPConfig>(&c.model)) {
      c.name += "-" + std::string(encodings::to_string(mlp->encoding.kind)) + "-" +
                std::string(activations::to_string(mlp->activation.kind));
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
  return experiment_from_json(read_json(path), path.parent_path());
}

audio::AudioClip load_input(const ExperimentConfig& config) {
  audio::AudioClip clip;
  switch (config.input.kind) {
    case InputSource::Kind::kWav: clip = audio::load_wav(config.input.wav); break;
    case InputSource::Kind::kSynth: clip = audio::synth_signal(config.input.synth); break;
    case InputSource::Kind::kMusic: clip = audio::synth_music(config.input.music); break;
  }
  if (config.max_duration > 0.0) {
    const auto keep = static_cast<std::size_t>(std::floor(config.max_duration * clip.sample_rate));
    if (keep < clip.samples.size()) clip.samples.resize(keep);
  }
  if (config.peak_normalize) clip = audio::normalize_peak(std::move(clip), 1.0);
  clip.validate();
  return clip;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("NEAF_SEED");
  if (!raw || !*raw) return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view s(raw);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ContractError("NEAF_SEED='" + std::string(s) + "' is not a non-negative integer");
  }
  return v;
}

void apply_seed(ExperimentConfig& config, std::uint64_t seed) {
  config.train.seed = seed;
  if (auto* mlp = std::get_if<models::MLPConfig>(&config.model)) mlp->encoding.seed = seed;
}

void apply_desk_scale(ExperimentConfig& config) {
  config.max_duration = 2.0;
  config.train.epochs = 300;
}

std::vector<ExperimentConfig> matrix_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ContractError("matrix config must be a JSON object");
  const nlohmann::json base = doc.value("base", nlohmann::json::object());
  std::vector<nlohmann::json> patches;

  nlohmann::json grids = doc.value("grid", nlohmann::json::array());
  if (grids.is_object()) grids = nlohmann::json::array({grids});
  for (const auto& grid : grids) {
    std::vector<std::string> acts;
    const auto& act_doc = grid.at("activations");
    if (act_doc.is_string() && act_doc.get<std::string>() == "all") {
      for (auto kind : activations::kAllActivations) acts.emplace_back(activations::to_string(kind));
    } else {
      acts = act_doc.get<std::vector<std::string>>();
    }
    const auto encs = grid.value("encodings", std::vector<std::string>{"identity"});
    const nlohmann::json model = grid.value("model", nlohmann::json::object());
    for (const auto& act : acts) {
      for (const auto& enc : encs) {
        nlohmann::json m = model;
        m["family"] = "mlp";
        m["activation"] = act;
        if (!m.contains("encoding")) {
          m["encoding"] = enc;
        } else {
          m["encoding"]["kind"] = enc;
        }
        patches.push_back({{"model", m}});
      }
    }
  }
  for (const auto& e : doc.value("experiments", nlohmann::json::array())) patches.push_back(e);

  std::vector<ExperimentConfig> out;
  out.reserve(patches.size());
  for (const auto& patch : patches) {
    nlohmann::json merged = base;
    merged.merge_patch(patch);
    out.push_back(experiment_from_json(merged, base_dir));
  }
  return out;
}

std::vector<ExperimentConfig> load_matrix(const std::filesystem::path& path) {
  return matrix_from_json(read_json(path), path.parent_path());
}

std::span<const std::string_view> sweep_parameters() noexcept {
  static constexpr std::array<std::string_view, 5> kNames{"L", "sigma", "omega", "a", "omega_schedule"};
  return kNames;
}

ExperimentConfig with_parameter(ExperimentConfig c, std::string_view name, std::string_view value) {
  if (name == "L") {
    auto& mlp = require_mlp(c, name);
    mlp.encoding.frequencies = parse_int(value, name);
    mlp.encoding.validate();
    mlp.widths.front() = mlp.encoding.output_dim();
  } else if (name == "sigma") {
    auto& mlp = require_mlp(c, name);
    mlp.encoding.sigma = parse_double(value, name);
    mlp.encoding.validate();
  } else if (name == "omega") {
    auto& mlp = require_mlp(c, name);
    if (!mlp.activation.hyper.contains("omega")) {
      throw ContractError(std::string(activations::to_string(mlp.activation.kind)) + " has no omega parameter");
    }
    const double omega = parse_double(value, name);
    mlp.activation.hyper["omega"] = omega;
    mlp.omega = omega;
    mlp.activation.validate();
  } else if (name == "a") {
    auto& mlp = require_mlp(c, name);
    auto& spec = mlp.activation;
    const double a = parse_double(value, name);
    if (spec.hyper.contains("a")) {
      spec.hyper["a"] = a;
    } else if (spec.learnable.contains("a")) {
      spec.learnable["a"] = a;
    } else {
      throw ContractError(std::string(activations::to_string(spec.kind)) + " has no parameter 'a'");
    }
    spec.validate();
  } else if (name == "omega_schedule") {
    auto* kan = std::get_if<models::FourierKANConfig>(&c.model);
    if (!kan) throw ContractError("sweep parameter 'omega_schedule' needs a fourier-kan model");
    std::vector<int> schedule;
    std::size_t start = 0;
    while (start <= value.size()) {
      const std::size_t end = std::min(value.find(':', start), value.size());
      schedule.push_back(parse_int(value.substr(start, end - start), name));
      start = end + 1;
    }
    kan->omega_schedule = schedule;
    if (kan->widths.size() != schedule.size() + 1) {
      // Keep the hidden width, match the depth to the schedule.
      const std::size_t hidden = kan->widths.size() > 2 ? kan->widths[1] : 64;
      kan->widths.assign(schedule.size() + 1, hidden);
      kan->widths.front() = 1;
      kan->widths.back() = 1;
    }
  } else {
    std::string names;
    for (auto n : sweep_parameters()) names += (names.empty() ? "" : ", ") + std::string(n);
    throw ContractError("unknown sweep parameter '" + std::string(name) + "' (valid: " + names + ")");
  }
  models::validate(c.model);
  c.name += "@" + std::string(name) + "=" + std::string(value);
  return c;
}

std::string describe_hyper(const models::ModelSpec& spec) {
  struct Visitor {
    std::string operator()(const models::MLPConfig& c) const {
      std::string out;
      auto add = [&out](const std::string& k, const std::string& v) { out += (out.empty() ? "" : ";") + k + "=" + v; };
      for (const auto& [k, v] : c.activation.hyper) add(k, number(v));
      for (const auto& [k, v] : c.activation.learnable) add(k + "0", number(v));
      if (c.encoding.kind != encodings::EncodingKind::kIdentity) add("L", std::to_string(c.encoding.frequencies));
      if (c.encoding.kind == encodings::EncodingKind::kRff) add("sigma", number(c.encoding.sigma));
      add("init", std::string(models::to_string(c.init)));
      return out;
    }
    std::string operator()(const models::FourierKANConfig& c) const {
      std::string s;
      for (int w : c.omega_schedule) s += (s.empty() ? "" : ":") + std::to_string(w);
      return "omega_schedule=" + s;
    }
    std::string operator()(const models::BSplineKANConfig& c) const {
      return "G=" + std::to_string(c.grid_size) + ";k=" + std::to_string(c.degree);
    }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace neaf::bench
