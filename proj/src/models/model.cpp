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

#include "neaf/models/model.hpp"

#include <algorithm>
#include <cmath>

#include "neaf/core/error.hpp"
#include "neaf/models/bspline_kan.hpp"
#include "neaf/models/fourier_kan.hpp"
#include "neaf/models/mlp.hpp"

namespace neaf::models {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_widths(const std::vector<std::size_t>& widths, const char* what) {
  if (widths.size() < 2) throw ContractError(std::string(what) + ": need at least two widths");
  if (widths.back() != 1) throw ContractError(std::string(what) + ": final width must be 1");
  if (std::any_of(widths.begin(), widths.end(), [](std::size_t w) { return w == 0; })) {
    throw ContractError(std::string(what) + ": widths must be positive");
  }
}

constexpr std::size_t kPredictChunk = 2048;

}  // namespace

std::string_view to_string(InitScheme scheme) noexcept {
  switch (scheme) {
    case InitScheme::kKaiming: return "kaiming";
    case InitScheme::kXavier: return "xavier";
    case InitScheme::kSitzmann: return "sitzmann";
  }
  return "?";
}

InitScheme init_from_string(std::string_view name) {
  if (name == "kaiming") return InitScheme::kKaiming;
  if (name == "xavier") return InitScheme::kXavier;
  if (name == "sitzmann") return InitScheme::kSitzmann;
  throw ContractError("unknown init scheme '" + std::string(name) + "' (expected kaiming, xavier or sitzmann)");
}

InitScheme default_init(activations::ActivationKind kind) noexcept {
  using activations::ActivationKind;
  if (activations::is_sine_family(kind)) return InitScheme::kSitzmann;
  switch (kind) {
    case ActivationKind::kRelu:
    case ActivationKind::kPrelu:
    case ActivationKind::kElu:
    case ActivationKind::kSilu:
    case ActivationKind::kSoftplus:
      return InitScheme::kKaiming;
    default:
      return InitScheme::kXavier;
  }
}

void MLPConfig::validate() const {
  check_widths(widths, "mlp");
  encoding.validate();
  activation.validate();
  if (widths.front() != encoding.output_dim()) {
    throw ContractError("mlp: input width " + std::to_string(widths.front()) + " does not match encoding dimension " +
                        std::to_string(encoding.output_dim()));
  }
  if (init == InitScheme::kSitzmann && !(omega > 0.0)) throw ContractError("mlp: sitzmann init needs omega > 0");
}

bool MLPConfig::init_mismatch() const noexcept {
  return init == InitScheme::kSitzmann && !activations::is_sine_family(activation.kind);
}

void FourierKANConfig::validate() const {
  check_widths(widths, "fourier-kan");
  if (widths.front() != 1) throw ContractError("fourier-kan: input width must be 1");
  if (omega_schedule.size() != widths.size() - 1) {
    throw ContractError("fourier-kan: omega schedule has " + std::to_string(omega_schedule.size()) +
                        " entries for " + std::to_string(widths.size() - 1) + " layers");
  }
  for (int w : omega_schedule) {
    if (w < 1) throw ContractError("fourier-kan: every Omega must be >= 1");
  }
}

void BSplineKANConfig::validate() const {
  check_widths(widths, "bspline-kan");
  if (widths.front() != 1) throw ContractError("bspline-kan: input width must be 1");
  if (degree < 0) throw ContractError("bspline-kan: degree must be >= 0");
  if (grid_size < 1) throw ContractError("bspline-kan: grid size must be >= 1");
}

std::vector<double> BSplineKANConfig::knots() const {
  const double h = 2.0 / grid_size;
  std::vector<double> t(static_cast<std::size_t>(grid_size + 2 * degree + 1));
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = -1.0 + (static_cast<double>(j) - degree) * h;
  return t;
}

std::string_view to_string(ModelFamily family) noexcept {
  switch (family) {
    case ModelFamily::kMlp: return "mlp";
    case ModelFamily::kFourierKan: return "fourier-kan";
    case ModelFamily::kBsplineKan: return "bspline-kan";
  }
  return "?";
}

ModelFamily family_from_string(std::string_view name) {
  if (name == "mlp") return ModelFamily::kMlp;
  if (name == "fourier-kan" || name == "fourier_kan") return ModelFamily::kFourierKan;
  if (name == "bspline-kan" || name == "bspline_kan") return ModelFamily::kBsplineKan;
  throw ContractError("unknown model family '" + std::string(name) + "' (expected mlp, fourier-kan or bspline-kan)");
}

ModelFamily family_of(const ModelSpec& spec) noexcept { return static_cast<ModelFamily>(spec.index()); }

void validate(const ModelSpec& spec) {
  std::visit([](const auto& c) { c.validate(); }, spec);
}

std::vector<std::size_t> mlp_widths(const encodings::EncodingConfig& encoding, std::size_t hidden_width,
                                    std::size_t hidden_layers) {
  std::vector<std::size_t> w{encoding.output_dim()};
  w.insert(w.end(), hidden_layers, hidden_width);
  w.push_back(1);
  return w;
}

nlohmann::json to_json(const ModelSpec& spec) {
  return std::visit(
      Overloaded{
          [](const MLPConfig& c) {
            return nlohmann::json{{"family", "mlp"},
                                  {"widths", c.widths},
                                  {"activation", activations::to_json(c.activation)},
                                  {"encoding", encodings::to_json(c.encoding)},
                                  {"init", to_string(c.init)},
                                  {"sitzmann_c", c.sitzmann_c},
                                  {"omega", c.omega}};
          },
          [](const FourierKANConfig& c) {
            return nlohmann::json{{"family", "fourier-kan"}, {"widths", c.widths}, {"omega_schedule", c.omega_schedule}};
          },
          [](const BSplineKANConfig& c) {
            return nlohmann::json{
                {"family", "bspline-kan"}, {"widths", c.widths}, {"degree", c.degree}, {"grid_size", c.grid_size}};
          },
      },
      spec);
}

ModelSpec model_from_json(const nlohmann::json& doc) {
  const ModelFamily family = family_from_string(doc.value("family", std::string("mlp")));
  switch (family) {
    case ModelFamily::kMlp: {
      MLPConfig c;
      c.activation = activations::activation_from_json(doc.value("activation", nlohmann::json("sine")));
      c.encoding = encodings::encoding_from_json(doc.value("encoding", nlohmann::json("identity")));
      c.init = doc.contains("init") ? init_from_string(doc["init"].get<std::string>()) : default_init(c.activation.kind);
      c.sitzmann_c = doc.value("sitzmann_c", 6.0);
      c.omega = doc.value("omega", activations::is_sine_family(c.activation.kind) ? c.activation.omega() : 30.0);
      if (doc.contains("widths")) {
        c.widths = doc["widths"].get<std::vector<std::size_t>>();
      } else {
        const auto hidden = doc.value("hidden", std::vector<std::size_t>(5, 256));
        c.widths = {c.encoding.output_dim()};
        c.widths.insert(c.widths.end(), hidden.begin(), hidden.end());
        c.widths.push_back(1);
      }
      c.validate();
      return c;
    }
    case ModelFamily::kFourierKan: {
      FourierKANConfig c;
      if (doc.contains("widths")) c.widths = doc["widths"].get<std::vector<std::size_t>>();
      if (doc.contains("omega_schedule")) c.omega_schedule = doc["omega_schedule"].get<std::vector<int>>();
      c.validate();
      return c;
    }
    case ModelFamily::kBsplineKan: {
      BSplineKANConfig c;
      if (doc.contains("widths")) c.widths = doc["widths"].get<std::vector<std::size_t>>();
      c.degree = doc.value("degree", 3);
      c.grid_size = doc.value("grid_size", 5);
      c.validate();
      return c;
    }
  }
  throw ContractError("unreachable model family");
}

void ModelParams::add(std::string name, core::Tensor value, bool trainable) {
  if (contains(name)) throw ContractError("duplicate parameter name '" + name + "'");
  tensors_.push_back(NamedTensor{std::move(name), std::move(value), trainable});
}

const NamedTensor* ModelParams::find(std::string_view name) const noexcept {
  for (const auto& t : tensors_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const core::Tensor& ModelParams::at(std::string_view name) const {
  const NamedTensor* t = find(name);
  if (!t) throw ContractError("no parameter named '" + std::string(name) + "'");
  return t->value;
}

core::Tensor& ModelParams::at(std::string_view name) {
  return const_cast<core::Tensor&>(static_cast<const ModelParams&>(*this).at(name));
}

std::size_t ModelParams::trainable_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tensors_) n += t.trainable ? t.value.size() : 0;
  return n;
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (a.tensors_.size() != b.tensors_.size()) return false;
  for (std::size_t i = 0; i < a.tensors_.size(); ++i) {
    const auto& x = a.tensors_[i];
    const auto& y = b.tensors_[i];
    if (x.name != y.name || x.trainable != y.trainable || !(x.value == y.value)) return false;
  }
  return true;
}

ModelParams init_params(const ModelSpec& spec, std::uint64_t seed) {
  validate(spec);
  ModelParams params;
  std::visit(Overloaded{
                 [&](const MLPConfig& c) { init_mlp(c, seed, params); },
                 [&](const FourierKANConfig& c) { init_fourier_kan(c, seed, params); },
                 [&](const BSplineKANConfig& c) { init_bspline_kan(c, seed, params); },
             },
             spec);
  return params;
}

BoundParams bind(core::Tape& tape, const ModelParams& params) {
  BoundParams bound;
  bound.vars.reserve(params.tensors().size());
  for (const auto& t : params.tensors()) bound.vars.push_back(t.trainable ? tape.parameter(t.value) : tape.constant(t.value));
  return bound;
}

core::Var record_forward(core::Tape& tape, const ModelSpec& spec, const ModelParams& params, const BoundParams& bound,
                         core::Var t) {
  return std::visit(Overloaded{
                        [&](const MLPConfig& c) { return record_mlp(tape, c, params, bound.vars, t); },
                        [&](const FourierKANConfig& c) { return record_fourier_kan(tape, c, bound.vars, t); },
                        [&](const BSplineKANConfig& c) { return record_bspline_kan(tape, c, bound.vars, t); },
                    },
                    spec);
}

std::vector<double> predict(const ModelSpec& spec, const ModelParams& params, std::span<const double> t) {
  std::vector<double> out;
  out.reserve(t.size());
  for (std::size_t start = 0; start < t.size(); start += kPredictChunk) {
    const std::size_t n = std::min(kPredictChunk, t.size() - start);
    core::Tape tape;
    BoundParams bound;
    for (const auto& p : params.tensors()) bound.vars.push_back(tape.constant(p.value));
    const core::Var coords =
        tape.constant(core::Tensor(core::Tensor::Shape{n, 1}, std::vector<double>(t.begin() + start, t.begin() + start + n)));
    const core::Var y = record_forward(tape, spec, params, bound, coords);
    const auto& v = tape.value(y).storage();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

double predict(const ModelSpec& spec, const ModelParams& params, double t) {
  const double coords[1] = {t};
  return predict(spec, params, std::span<const double>(coords, 1)).front();
}

std::size_t param_count(const ModelSpec& spec) {
  return std::visit(Overloaded{
                        [](const MLPConfig& c) { return mlp_param_count(c); },
                        [](const FourierKANConfig& c) { return fourier_kan_param_count(c); },
                        [](const BSplineKANConfig& c) { return bspline_kan_param_count(c); },
                    },
                    spec);
}

void check_params(const ModelSpec& spec, const ModelParams& params) {
  const ModelParams reference = init_params(spec, 0);
  const auto& want = reference.tensors();
  const auto& got = params.tensors();
  if (want.size() != got.size()) {
    throw ContractError("parameter count mismatch: expected " + std::to_string(want.size()) + " tensors, got " +
                        std::to_string(got.size()));
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i].name != got[i].name || want[i].value.shape() != got[i].value.shape()) {
      throw ContractError("parameter " + std::to_string(i) + ": expected " + want[i].name + " " +
                          core::shape_string(want[i].value.shape()) + ", got " + got[i].name + " " +
                          core::shape_string(got[i].value.shape()));
    }
  }
}

}  // namespace neaf::models
