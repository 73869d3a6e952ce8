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

#include "neaf/models/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "neaf/core/error.hpp"
#include "neaf/models/model.hpp"

namespace neaf::models {

namespace {
static_assert(std::endian::native == std::endian::little, "checkpoint codec assumes a little-endian host");
constexpr char kMagic[8] = {'N', 'E', 'A', 'F', 'C', 'K', 'P', 'T'};
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  nlohmann::json tensors = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& t : checkpoint.params.tensors()) {
    tensors.push_back({{"name", t.name}, {"shape", t.value.shape()}, {"trainable", t.trainable}, {"offset", offset}});
    offset += t.value.size();
  }
  const nlohmann::json header{
      {"format", 1}, {"model", to_json(checkpoint.spec)}, {"tensors", tensors}, {"meta", checkpoint.meta}};
  const std::string text = header.dump();
  const std::uint64_t length = text.size();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(&length), sizeof length);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& t : checkpoint.params.tensors()) {
    out.write(reinterpret_cast<const char*>(t.value.data()), static_cast<std::streamsize>(t.value.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  std::uint64_t length = 0;
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(&length), sizeof length);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw Error(path.string() + ": not a NeAF checkpoint");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw Error(path.string() + ": truncated header");
  const auto header = nlohmann::json::parse(text);
  if (header.value("format", 0) != 1) throw Error(path.string() + ": unsupported checkpoint format");

  Checkpoint ckpt{model_from_json(header.at("model")), {}, header.value("meta", nlohmann::json::object())};
  for (const auto& entry : header.at("tensors")) {
    core::Tensor value(entry.at("shape").get<core::Tensor::Shape>());
    in.read(reinterpret_cast<char*>(value.data()), static_cast<std::streamsize>(value.size() * sizeof(double)));
    if (!in) throw Error(path.string() + ": truncated tensor data for " + entry.at("name").get<std::string>());
    ckpt.params.add(entry.at("name").get<std::string>(), std::move(value), entry.value("trainable", true));
  }
  check_params(ckpt.spec, ckpt.params);
  return ckpt;
}

}  // namespace neaf::models
