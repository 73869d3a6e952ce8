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

#include <span>

#include "neaf/core/tape.hpp"
#include "neaf/models/config.hpp"
#include "neaf/models/params.hpp"

namespace neaf::models {

void init_mlp(const MLPConfig& config, std::uint64_t seed, ModelParams& params);

std::string mlp_weight_name(std::size_t layer);  // [d_in, d_out]
std::string mlp_bias_name(std::size_t layer);    // [d_out]
std::string mlp_activation_name(std::size_t layer, std::string_view parameter);
inline constexpr const char* kRffFrequencies = "encoding.rff";

core::Var record_mlp(core::Tape& tape, const MLPConfig& config, const ModelParams& params,
                     std::span<const core::Var> vars, core::Var t);

std::size_t mlp_param_count(const MLPConfig& config);

}  // namespace neaf::models
