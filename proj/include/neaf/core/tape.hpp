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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neaf/core/tensor.hpp"

namespace neaf::core {

/// Handle to a value recorded on a Tape.
struct Var {
  std::uint32_t index = 0;
  friend bool operator==(Var, Var) = default;
};

enum class OpKind : std::uint8_t {
  kLeaf,
  kAdd,
  kSub,
  kMul,
  kMatMul,
  kSin,
  kCos,
  kExp,
  kAbs,
  kMax,
  kReciprocal,
  kLog,
  kPower,
  kScale,
  kSum,
  kMean,
  kCustom,
};

std::string_view op_name(OpKind kind) noexcept;

/// User-defined differentiable operation.
///
/// forward() must be a pure function of its inputs so that Tape::replay() can
/// reproduce the recorded value. backward() accumulates (+=) into the slots of
/// grad_inputs; a null slot means that input does not need a gradient.
class CustomOp {
 public:
  virtual ~CustomOp() = default;
  virtual std::string_view name() const = 0;
  virtual Tensor forward(std::span<const Tensor* const> inputs) const = 0;
  virtual void backward(std::span<const Tensor* const> inputs, const Tensor& output, const Tensor& grad_output,
                        std::span<Tensor* const> grad_inputs) const = 0;
};

/// Gradients of a scalar output with respect to the leaves of a tape.
class Gradients {
 public:
  Gradients() = default;
  Gradients(std::vector<std::optional<Tensor>> grads, std::vector<Tensor::Shape> leaf_shapes);

  /// d(output)/d(leaf); a zero tensor when the leaf did not influence the output.
  Tensor of(Var leaf) const;
  /// Same as of() but without the zero-fill copy; nullptr for untouched leaves.
  const Tensor* find(Var leaf) const;

 private:
  std::vector<std::optional<Tensor>> grads_;
  std::vector<Tensor::Shape> shapes_;
};

/// Define-by-run record of array operations for reverse-mode differentiation.
///
/// Nodes are appended in evaluation order, so the node list is always a
/// topological order. Binary elementwise ops broadcast a scalar or a row vector
/// (shape [C] or [1, C]) over the other operand.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  Var parameter(Tensor value);
  Var constant(Tensor value);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var matmul(Var a, Var b);
  Var sin(Var x);
  Var cos(Var x);
  Var exp(Var x);
  Var abs(Var x);
  /// Elementwise max. Ties route the gradient to b, so max(x, 0) has zero slope at x = 0.
  Var max(Var a, Var b);
  Var reciprocal(Var x);
  Var log(Var x);
  Var power(Var x, double exponent);
  Var scale(Var x, double factor);
  Var sum(Var x);
  Var mean(Var x);
  Var custom(std::shared_ptr<const CustomOp> op, std::vector<Var> inputs);

  const Tensor& value(Var v) const { return nodes_.at(v.index).value; }
  bool requires_grad(Var v) const { return nodes_.at(v.index).requires_grad; }
  OpKind kind(Var v) const { return nodes_.at(v.index).kind; }
  std::span<const std::uint32_t> inputs(Var v) const { return nodes_.at(v.index).inputs; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Number of abs/max evaluations that landed exactly on a kink.
  std::size_t kink_hits() const noexcept { return kink_hits_; }

  /// Reverse sweep from a single-element output.
  Gradients backward(Var output) const;

  /// Recomputes every non-leaf node from its inputs and reports whether all
  /// recomputed values are bit-identical to the recorded ones.
  bool replay_matches() const;

 private:
  struct Node {
    OpKind kind = OpKind::kLeaf;
    std::vector<std::uint32_t> inputs;
    Tensor value;
    double arg = 0.0;
    bool requires_grad = false;
    std::shared_ptr<const CustomOp> custom;
  };

  Var push(Node node);
  Tensor evaluate(const Node& node, std::size_t* kinks) const;
  void propagate(const Node& node, Tensor grad, std::vector<std::optional<Tensor>>& grads) const;

  std::vector<Node> nodes_;
  std::size_t kink_hits_ = 0;
};

}  // namespace neaf::core
