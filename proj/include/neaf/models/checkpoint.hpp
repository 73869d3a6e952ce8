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

#include <filesystem>

#include <nlohmann/json.hpp>

#include "neaf/models/config.hpp"
#include "neaf/models/params.hpp"

namespace neaf::models {

struct Checkpoint {
  ModelSpec spec;
  ModelParams params;
  /// Free-form metadata (training config, final loss, ...).
  nlohmann::json meta = nlohmann::json::object();
};

/// Layout: "NEAFCKPT", u64 header length, JSON header naming every tensor with
/// its shape and offset, then all tensor data as little-endian float64.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace neaf::models
