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
#include <span>
#include <vector>

#include "neaf/core/tape.hpp"
#include "neaf/models/config.hpp"
#include "neaf/models/params.hpp"

namespace neaf::models {

/// Samples initial parameters (and frozen RFF frequencies) for any family.
ModelParams init_params(const ModelSpec& spec, std::uint64_t seed);

/// Parameters in tape form, in the same order as ModelParams::tensors().
struct BoundParams {
  std::vector<core::Var> vars;
};

/// Places every tensor on the tape; trainable ones as differentiable leaves.
BoundParams bind(core::Tape& tape, const ModelParams& params);

/// Records f(t) for a [B, 1] coordinate node; returns a [B, 1] node.
/// Throws NumericError naming the first layer that produced NaN/Inf.
core::Var record_forward(core::Tape& tape, const ModelSpec& spec, const ModelParams& params, const BoundParams& bound,
                         core::Var t);

/// f(t) at each coordinate, evaluated in chunks without gradient bookkeeping.
std::vector<double> predict(const ModelSpec& spec, const ModelParams& params, std::span<const double> t);
double predict(const ModelSpec& spec, const ModelParams& params, double t);

/// Trainable scalar count implied by the config alone.
std::size_t param_count(const ModelSpec& spec);

/// Checks that tensor names and shapes match what init_params would produce.
void check_params(const ModelSpec& spec, const ModelParams& params);

}  // namespace neaf::models
