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

#include <string>
#include <string_view>
#include <vector>

#include "neaf/core/tensor.hpp"

namespace neaf::models {

struct NamedTensor {
  std::string name;
  core::Tensor value;
  bool trainable = true;
};

/// Flat, ordered list of uniquely named model tensors.
class ModelParams {
 public:
  void add(std::string name, core::Tensor value, bool trainable = true);

  std::vector<NamedTensor>& tensors() noexcept { return tensors_; }
  const std::vector<NamedTensor>& tensors() const noexcept { return tensors_; }

  const core::Tensor& at(std::string_view name) const;
  core::Tensor& at(std::string_view name);
  const NamedTensor* find(std::string_view name) const noexcept;
  bool contains(std::string_view name) const noexcept { return find(name) != nullptr; }

  /// Number of trainable scalars.
  std::size_t trainable_count() const noexcept;

  friend bool operator==(const ModelParams& a, const ModelParams& b);

 private:
  std::vector<NamedTensor> tensors_;
};

}  // namespace neaf::models
