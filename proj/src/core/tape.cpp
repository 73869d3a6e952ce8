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

#include "neaf/core/tape.hpp"

#include <cmath>
#include <cstring>

#include "neaf/core/error.hpp"
#include "neaf/core/vecmath.hpp"

namespace neaf::core {

namespace {

enum class Broadcast { kSame, kScalarA, kScalarB, kRowA, kRowB };

bool is_row_of(const Tensor& row, const Tensor& full) {
  return row.rows() == 1 && row.cols() == full.cols() && row.rank() <= 2;
}

Broadcast broadcast_mode(const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return Broadcast::kSame;
  if (b.size() == 1) return Broadcast::kScalarB;
  if (a.size() == 1) return Broadcast::kScalarA;
  if (is_row_of(b, a)) return Broadcast::kRowB;
  if (is_row_of(a, b)) return Broadcast::kRowA;
  throw ContractError("cannot broadcast " + shape_string(a.shape()) + " with " + shape_string(b.shape()));
}

const Tensor& broadcast_target(const Tensor& a, const Tensor& b, Broadcast mode) {
  return mode == Broadcast::kScalarA || mode == Broadcast::kRowA ? b : a;
}

// Calls f(i, a_i, b_i) for every flat index i of the broadcast shape.
template <typename F>
void broadcast_each(const Tensor& a, const Tensor& b, Broadcast mode, F&& f) {
  const Tensor& big = broadcast_target(a, b, mode);
  const std::size_t n = big.size();
  const std::size_t cols = big.cols();
  const std::size_t rows = cols == 0 ? 0 : n / cols;
  const double* pa = a.data();
  const double* pb = b.data();
  switch (mode) {
    case Broadcast::kSame:
      for (std::size_t i = 0; i < n; ++i) f(i, pa[i], pb[i]);
      break;
    case Broadcast::kScalarB: {
      const double vb = pb[0];
      for (std::size_t i = 0; i < n; ++i) f(i, pa[i], vb);
      break;
    }
    case Broadcast::kScalarA: {
      const double va = pa[0];
      for (std::size_t i = 0; i < n; ++i) f(i, va, pb[i]);
      break;
    }
    case Broadcast::kRowB:
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t base = r * cols;
        for (std::size_t c = 0; c < cols; ++c) f(base + c, pa[base + c], pb[c]);
      }
      break;
    case Broadcast::kRowA:
      for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t base = r * cols;
        for (std::size_t c = 0; c < cols; ++c) f(base + c, pa[c], pb[base + c]);
      }
      break;
  }
}

template <typename F>
Tensor binary(const Tensor& a, const Tensor& b, F f) {
  const Broadcast mode = broadcast_mode(a, b);
  Tensor out = Tensor::like(broadcast_target(a, b, mode));
  double* po = out.data();
  broadcast_each(a, b, mode, [&](std::size_t i, double x, double y) { po[i] = f(x, y); });
  return out;
}

template <typename F>
Tensor unary(const Tensor& x, F f) {
  Tensor out = Tensor::like(x);
  const double* px = x.data();
  double* po = out.data();
  for (std::size_t i = 0, n = x.size(); i < n; ++i) po[i] = f(px[i]);
  return out;
}

// Sums a full-size gradient down to the shape of a broadcast operand.
Tensor reduce_to(Tensor g, const Tensor& target) {
  if (g.size() == target.size()) {
    if (g.shape() == target.shape()) return g;
    return Tensor(target.shape(), std::move(g.storage()));
  }
  Tensor out = Tensor::like(target);
  const double* pg = g.data();
  if (target.size() == 1) {
    double s = 0.0;
    for (std::size_t i = 0, n = g.size(); i < n; ++i) s += pg[i];
    out[0] = s;
    return out;
  }
  const std::size_t cols = target.cols();
  const std::size_t rows = g.size() / cols;
  double* po = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = pg + r * cols;
    for (std::size_t c = 0; c < cols; ++c) po[c] += row[c];
  }
  return out;
}

void accumulate(std::optional<Tensor>& slot, Tensor g) {
  if (!slot) {
    slot = std::move(g);
    return;
  }
  double* dst = slot->data();
  const double* src = g.data();
  for (std::size_t i = 0, n = g.size(); i < n; ++i) dst[i] += src[i];
}

// g broadcast against x, elementwise product with h(x_i, out_i).
template <typename F>
Tensor chain(const Tensor& g, const Tensor& x, const Tensor& out, F f) {
  Tensor r = Tensor::like(x);
  const double* pg = g.data();
  const double* px = x.data();
  const double* po = out.data();
  double* pr = r.data();
  for (std::size_t i = 0, n = x.size(); i < n; ++i) pr[i] = pg[i] * f(px[i], po[i]);
  return r;
}

using VecFn = void (*)(const double*, double*, std::size_t, double) noexcept;

Tensor map_vec(const Tensor& x, VecFn f, double scale = 1.0) {
  Tensor out = Tensor::like(x);
  f(x.data(), out.data(), x.size(), scale);
  return out;
}

Tensor exp_vec(const Tensor& x) {
  Tensor out = Tensor::like(x);
  vecmath::exp(x.data(), out.data(), x.size());
  return out;
}

// g * h where h has the shape of g.
Tensor times(const Tensor& g, Tensor h) {
  double* ph = h.data();
  const double* pg = g.data();
  for (std::size_t i = 0, n = h.size(); i < n; ++i) ph[i] *= pg[i];
  return h;
}

bool bit_equal(const Tensor& a, const Tensor& b) {
  return a.shape() == b.shape() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}


// Forward product C = A B with every C[r, j] formed as one fma chain over k in
// ascending order. fma is exactly rounded, so the value of a row does not
// depend on the vector width used or on which other rows share the call. BLAS
// style kernels (Eigen included) pick different code paths for edge rows, and
// a coordinate would then evaluate differently depending on its batch.
template <std::size_t R, std::size_t J>
void product_tile(const double* a, std::size_t K, const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  double acc[R][J] = {};
  for (std::size_t k = 0; k < K; ++k) {
    const double* bk = b + k * ldb;
    for (std::size_t r = 0; r < R; ++r) {
      const double av = a[r * K + k];
#pragma omp simd
      for (std::size_t j = 0; j < J; ++j) acc[r][j] = std::fma(av, bk[j], acc[r][j]);
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t j = 0; j < J; ++j) c[r * ldc + j] = acc[r][j];
  }
}

template <std::size_t R>
void product_rows(const double* a, std::size_t K, const double* b, std::size_t m, double* c) {
  std::size_t j = 0;
  for (; j + 16 <= m; j += 16) product_tile<R, 16>(a, K, b + j, m, c + j, m);
  for (; j + 8 <= m; j += 8) product_tile<R, 8>(a, K, b + j, m, c + j, m);
  for (; j + 4 <= m; j += 4) product_tile<R, 4>(a, K, b + j, m, c + j, m);
  for (; j < m; ++j) product_tile<R, 1>(a, K, b + j, m, c + j, m);
}

void product(const Tensor& a, const Tensor& b, Tensor& c) {
  const std::size_t n = a.rows();
  const std::size_t K = a.cols();
  const std::size_t m = b.cols();
  std::size_t r = 0;
  for (; r + 4 <= n; r += 4) product_rows<4>(a.data() + r * K, K, b.data(), m, c.data() + r * m);
  for (; r < n; ++r) product_rows<1>(a.data() + r * K, K, b.data(), m, c.data() + r * m);
}

}  // namespace

std::string_view op_name(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::kLeaf: return "leaf";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kSin: return "sin";
    case OpKind::kCos: return "cos";
    case OpKind::kExp: return "exp";
    case OpKind::kAbs: return "abs";
    case OpKind::kMax: return "max";
    case OpKind::kReciprocal: return "reciprocal";
    case OpKind::kLog: return "log";
    case OpKind::kPower: return "power";
    case OpKind::kScale: return "scale";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kCustom: return "custom";
  }
  return "?";
}

Gradients::Gradients(std::vector<std::optional<Tensor>> grads, std::vector<Tensor::Shape> leaf_shapes)
    : grads_(std::move(grads)), shapes_(std::move(leaf_shapes)) {}

Tensor Gradients::of(Var leaf) const {
  if (leaf.index < grads_.size() && grads_[leaf.index]) return *grads_[leaf.index];
  if (leaf.index >= shapes_.size()) throw ContractError("gradient requested for unknown node");
  return Tensor(shapes_[leaf.index]);
}

const Tensor* Gradients::find(Var leaf) const {
  if (leaf.index < grads_.size() && grads_[leaf.index]) return &*grads_[leaf.index];
  return nullptr;
}

Var Tape::push(Node node) {
  if (node.kind != OpKind::kLeaf) {
    for (auto in : node.inputs) node.requires_grad = node.requires_grad || nodes_[in].requires_grad;
    node.value = evaluate(node, &kink_hits_);
  }
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::parameter(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  return push(std::move(n));
}

#define NEAF_UNARY(fn, KIND) \
  Var Tape::fn(Var x) {      \
    Node n;                  \
    n.kind = KIND;           \
    n.inputs = {x.index};    \
    return push(std::move(n)); \
  }

#define NEAF_BINARY(fn, KIND)       \
  Var Tape::fn(Var a, Var b) {      \
    Node n;                         \
    n.kind = KIND;                  \
    n.inputs = {a.index, b.index};  \
    return push(std::move(n));      \
  }

NEAF_BINARY(add, OpKind::kAdd)
NEAF_BINARY(sub, OpKind::kSub)
NEAF_BINARY(mul, OpKind::kMul)
NEAF_BINARY(matmul, OpKind::kMatMul)
NEAF_BINARY(max, OpKind::kMax)
NEAF_UNARY(sin, OpKind::kSin)
NEAF_UNARY(cos, OpKind::kCos)
NEAF_UNARY(exp, OpKind::kExp)
NEAF_UNARY(abs, OpKind::kAbs)
NEAF_UNARY(reciprocal, OpKind::kReciprocal)
NEAF_UNARY(log, OpKind::kLog)
NEAF_UNARY(sum, OpKind::kSum)
NEAF_UNARY(mean, OpKind::kMean)

#undef NEAF_UNARY
#undef NEAF_BINARY

Var Tape::power(Var x, double exponent) {
  Node n;
  n.kind = OpKind::kPower;
  n.inputs = {x.index};
  n.arg = exponent;
  return push(std::move(n));
}

Var Tape::scale(Var x, double factor) {
  Node n;
  n.kind = OpKind::kScale;
  n.inputs = {x.index};
  n.arg = factor;
  return push(std::move(n));
}

Var Tape::custom(std::shared_ptr<const CustomOp> op, std::vector<Var> inputs) {
  if (!op) throw ContractError("custom op is null");
  Node n;
  n.kind = OpKind::kCustom;
  n.custom = std::move(op);
  n.inputs.reserve(inputs.size());
  for (Var v : inputs) n.inputs.push_back(v.index);
  return push(std::move(n));
}

Tensor Tape::evaluate(const Node& node, std::size_t* kinks) const {
  auto in = [&](std::size_t k) -> const Tensor& { return nodes_[node.inputs[k]].value; };
  switch (node.kind) {
    case OpKind::kLeaf:
      return node.value;
    case OpKind::kAdd:
      return binary(in(0), in(1), [](double a, double b) { return a + b; });
    case OpKind::kSub:
      return binary(in(0), in(1), [](double a, double b) { return a - b; });
    case OpKind::kMul:
      return binary(in(0), in(1), [](double a, double b) { return a * b; });
    case OpKind::kMax: {
      std::size_t ties = 0;
      Tensor out = binary(in(0), in(1), [&ties](double a, double b) {
        ties += (a == b);
        return a > b ? a : b;
      });
      if (kinks) *kinks += ties;
      return out;
    }
    case OpKind::kMatMul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      if (a.cols() != b.rows()) {
        throw ContractError("matmul inner dimensions differ: " + shape_string(a.shape()) + " x " +
                            shape_string(b.shape()));
      }
      Tensor out = Tensor::matrix(a.rows(), b.cols());
      product(a, b, out);
      return out;
    }
    case OpKind::kSin:
      return map_vec(in(0), vecmath::sin);
    case OpKind::kCos:
      return map_vec(in(0), vecmath::cos);
    case OpKind::kExp:
      return exp_vec(in(0));
    case OpKind::kAbs: {
      std::size_t zeros = 0;
      Tensor out = unary(in(0), [&zeros](double x) {
        zeros += (x == 0.0);
        return std::abs(x);
      });
      if (kinks) *kinks += zeros;
      return out;
    }
    case OpKind::kReciprocal:
      return unary(in(0), [](double x) { return 1.0 / x; });
    case OpKind::kLog:
      return unary(in(0), [](double x) { return std::log(x); });
    case OpKind::kPower: {
      const double p = node.arg;
      return unary(in(0), [p](double x) { return std::pow(x, p); });
    }
    case OpKind::kScale: {
      const double s = node.arg;
      return unary(in(0), [s](double x) { return s * x; });
    }
    case OpKind::kSum:
    case OpKind::kMean: {
      double s = 0.0;
      for (double v : in(0).values()) s += v;
      if (node.kind == OpKind::kMean) s /= static_cast<double>(in(0).size());
      return Tensor::scalar(s);
    }
    case OpKind::kCustom: {
      std::vector<const Tensor*> ptrs;
      ptrs.reserve(node.inputs.size());
      for (auto i : node.inputs) ptrs.push_back(&nodes_[i].value);
      return node.custom->forward(ptrs);
    }
  }
  throw ContractError("unknown op");
}

void Tape::propagate(const Node& node, Tensor g, std::vector<std::optional<Tensor>>& grads) const {
  auto in = [&](std::size_t k) -> const Tensor& { return nodes_[node.inputs[k]].value; };
  auto needs = [&](std::size_t k) { return nodes_[node.inputs[k]].requires_grad; };
  auto slot = [&](std::size_t k) -> std::optional<Tensor>& { return grads[node.inputs[k]]; };
  const Tensor& out = node.value;

  switch (node.kind) {
    case OpKind::kLeaf:
      return;
    case OpKind::kAdd:
    case OpKind::kSub: {
      const bool both = needs(0) && needs(1);
      if (needs(0)) accumulate(slot(0), reduce_to(both ? Tensor(g) : std::move(g), in(0)));
      if (needs(1)) {
        if (node.kind == OpKind::kSub) {
          for (double& v : g.values()) v = -v;
        }
        accumulate(slot(1), reduce_to(std::move(g), in(1)));
      }
      return;
    }
    case OpKind::kMul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      const Broadcast mode = broadcast_mode(a, b);
      const double* pg = g.data();
      if (needs(0)) {
        Tensor ga = Tensor::like(g);
        double* p = ga.data();
        broadcast_each(a, b, mode, [&](std::size_t i, double, double y) { p[i] = pg[i] * y; });
        accumulate(slot(0), reduce_to(std::move(ga), a));
      }
      if (needs(1)) {
        Tensor gb = Tensor::like(g);
        double* p = gb.data();
        broadcast_each(a, b, mode, [&](std::size_t i, double x, double) { p[i] = pg[i] * x; });
        accumulate(slot(1), reduce_to(std::move(gb), b));
      }
      return;
    }
    case OpKind::kMax: {
      // a receives the gradient where it wins strictly, b everywhere else.
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      const Broadcast mode = broadcast_mode(a, b);
      const double* pg = g.data();
      if (needs(0)) {
        Tensor ga = Tensor::like(g);
        double* p = ga.data();
        broadcast_each(a, b, mode, [&](std::size_t i, double x, double y) { p[i] = x > y ? pg[i] : 0.0; });
        accumulate(slot(0), reduce_to(std::move(ga), a));
      }
      if (needs(1)) {
        Tensor gb = Tensor::like(g);
        double* p = gb.data();
        broadcast_each(a, b, mode, [&](std::size_t i, double x, double y) { p[i] = x > y ? 0.0 : pg[i]; });
        accumulate(slot(1), reduce_to(std::move(gb), b));
      }
      return;
    }
    case OpKind::kMatMul: {
      const Tensor& a = in(0);
      const Tensor& b = in(1);
      if (needs(0)) {
        Tensor ga = Tensor::like(a);
        ga.matrix().noalias() = g.matrix() * b.matrix().transpose();
        accumulate(slot(0), std::move(ga));
      }
      if (needs(1)) {
        Tensor gb = Tensor::like(b);
        gb.matrix().noalias() = a.matrix().transpose() * g.matrix();
        accumulate(slot(1), std::move(gb));
      }
      return;
    }
    case OpKind::kSin:
      accumulate(slot(0), times(g, map_vec(in(0), vecmath::cos)));
      return;
    case OpKind::kCos: {
      Tensor h = map_vec(in(0), vecmath::sin);
      for (double& v : h.values()) v = -v;
      accumulate(slot(0), times(g, std::move(h)));
      return;
    }
    case OpKind::kExp:
      accumulate(slot(0), chain(g, in(0), out, [](double, double y) { return y; }));
      return;
    case OpKind::kAbs:
      accumulate(slot(0), chain(g, in(0), out, [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }));
      return;
    case OpKind::kReciprocal:
      accumulate(slot(0), chain(g, in(0), out, [](double, double y) { return -y * y; }));
      return;
    case OpKind::kLog:
      accumulate(slot(0), chain(g, in(0), out, [](double x, double) { return 1.0 / x; }));
      return;
    case OpKind::kPower: {
      const double p = node.arg;
      accumulate(slot(0), chain(g, in(0), out, [p](double x, double) { return p * std::pow(x, p - 1.0); }));
      return;
    }
    case OpKind::kScale: {
      const double s = node.arg;
      accumulate(slot(0), unary(g, [s](double v) { return s * v; }));
      return;
    }
    case OpKind::kSum:
    case OpKind::kMean: {
      double u = g.item();
      if (node.kind == OpKind::kMean) u /= static_cast<double>(in(0).size());
      accumulate(slot(0), Tensor::like(in(0), u));
      return;
    }
    case OpKind::kCustom: {
      std::vector<const Tensor*> inputs;
      std::vector<Tensor*> outs;
      for (std::size_t k = 0; k < node.inputs.size(); ++k) {
        inputs.push_back(&in(k));
        if (needs(k)) {
          auto& s = slot(k);
          if (!s) s = Tensor::like(in(k));
          outs.push_back(&*s);
        } else {
          outs.push_back(nullptr);
        }
      }
      node.custom->backward(inputs, out, g, outs);
      return;
    }
  }
}

Gradients Tape::backward(Var output) const {
  if (output.index >= nodes_.size()) throw ContractError("backward from unknown node");
  if (nodes_[output.index].value.size() != 1) {
    throw ContractError("backward requires a scalar output, got shape " +
                        shape_string(nodes_[output.index].value.shape()));
  }
  std::vector<std::optional<Tensor>> grads(nodes_.size());
  grads[output.index] = Tensor::like(nodes_[output.index].value, 1.0);
  for (std::size_t i = output.index + 1; i-- > 0;) {
    const Node& node = nodes_[i];
    if (!grads[i] || !node.requires_grad) continue;
    if (node.kind == OpKind::kLeaf) continue;
    Tensor g = std::move(*grads[i]);
    grads[i].reset();
    propagate(node, std::move(g), grads);
  }
  std::vector<Tensor::Shape> shapes(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == OpKind::kLeaf) shapes[i] = nodes_[i].value.shape();
  }
  return Gradients(std::move(grads), std::move(shapes));
}

bool Tape::replay_matches() const {
  for (const Node& node : nodes_) {
    if (node.kind == OpKind::kLeaf) continue;
    if (!bit_equal(evaluate(node, nullptr), node.value)) return false;
  }
  return true;
}

}  // namespace neaf::core
