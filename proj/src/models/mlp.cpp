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

#include "neaf/models/mlp.hpp"

#include <random>

#include "neaf/core/error.hpp"
#include "neaf/models/init.hpp"

namespace neaf::models {

std::string mlp_weight_name(std::size_t layer) { return "mlp." + std::to_string(layer) + ".weight"; }
std::string mlp_bias_name(std::size_t layer) { return "mlp." + std::to_string(layer) + ".bias"; }
std::string mlp_activation_name(std::size_t layer, std::string_view parameter) {
  return "mlp." + std::to_string(layer) + ".act." + std::string(parameter);
}

void init_mlp(const MLPConfig& config, std::uint64_t seed, ModelParams& params) {
  config.validate();
  std::mt19937_64 rng(seed);
  const std::size_t layers = config.widths.size() - 1;
  const auto learnables = activations::learnable_names(config.activation.kind);
  for (std::size_t i = 0; i < layers; ++i) {
    core::Tensor w = core::Tensor::matrix(config.widths[i], config.widths[i + 1]);
    init_weight(w, config.init, i == 0, config.sitzmann_c, config.omega, rng);
    params.add(mlp_weight_name(i), std::move(w));
    params.add(mlp_bias_name(i), core::Tensor(core::Tensor::Shape{config.widths[i + 1]}));
    if (i + 1 < layers) {
      for (auto name : learnables) {
        params.add(mlp_activation_name(i, name), core::Tensor::scalar(config.activation.learnable.at(std::string(name))));
      }
    }
  }
  if (config.encoding.kind == encodings::EncodingKind::kRff) {
    const encodings::Encoder encoder(config.encoding);
    const auto b = encoder.rff_frequencies();
    params.add(kRffFrequencies, core::Tensor::vector({b.begin(), b.end()}), false);
  }
}

core::Var record_mlp(core::Tape& tape, const MLPConfig& config, const ModelParams& params,
                     std::span<const core::Var> vars, core::Var t) {
  const auto& tensors = params.tensors();
  auto var_of = [&](const std::string& name) -> core::Var {
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      if (tensors[i].name == name) return vars[i];
    }
    throw ContractError("mlp: missing parameter '" + name + "'");
  };

  core::Var z = t;
  if (config.encoding.kind == encodings::EncodingKind::kRff) {
    const auto& b = params.at(kRffFrequencies).storage();
    z = encodings::Encoder(config.encoding, b).record(tape, t);
  } else {
    z = encodings::Encoder(config.encoding).record(tape, t);
  }

  const std::size_t layers = config.widths.size() - 1;
  const auto learnable = activations::learnable_names(config.activation.kind);
  std::vector<core::Var> act_vars;
  for (std::size_t i = 0; i < layers; ++i) {
    z = tape.add(tape.matmul(z, var_of(mlp_weight_name(i))), var_of(mlp_bias_name(i)));
    if (i + 1 < layers) {
      act_vars.clear();
      for (auto name : learnable) act_vars.push_back(var_of(mlp_activation_name(i, name)));
      z = activations::record(tape, config.activation, z, act_vars);
    }
    if (!tape.value(z).all_finite()) throw NumericError("mlp: non-finite value in layer " + std::to_string(i));
  }
  return z;
}

std::size_t mlp_param_count(const MLPConfig& config) {
  std::size_t n = 0;
  const std::size_t layers = config.widths.size() - 1;
  for (std::size_t i = 0; i < layers; ++i) n += config.widths[i] * config.widths[i + 1] + config.widths[i + 1];
  n += (layers - 1) * activations::learnable_names(config.activation.kind).size();
  return n;
}

}  // namespace neaf::models
