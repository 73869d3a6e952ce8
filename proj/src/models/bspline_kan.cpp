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

#include "neaf/models/bspline_kan.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "neaf/activations.hpp"
#include "neaf/core/error.hpp"

namespace neaf::models {

namespace {

void check_knots(std::span<const double> knots, int degree) {
  if (degree < 0) throw ContractError("bspline: degree must be >= 0");
  if (knots.size() < static_cast<std::size_t>(degree) + 2) throw ContractError("bspline: need at least degree + 2 knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i] < knots[i - 1]) throw ContractError("bspline: knots must be non-decreasing");
  }
}

}  // namespace

// Knots plus the reciprocal of every Cox-de Boor denominator (0 where the
// denominator vanishes), so evaluation needs no divisions.
class KnotTable {
 public:
  KnotTable(std::span<const double> knots, int degree) : t_(knots.begin(), knots.end()), degree_(degree) {
    check_knots(t_, degree_);
    spans_ = t_.size() - 1;
    inv_.resize(static_cast<std::size_t>(degree_) + 1);
    for (int p = 1; p <= degree_; ++p) {
      auto& level = inv_[static_cast<std::size_t>(p)];
      level.resize(spans_ - static_cast<std::size_t>(p) + 1);
      for (std::size_t i = 0; i < level.size(); ++i) {
        const double den = t_[i + static_cast<std::size_t>(p)] - t_[i];
        level[i] = den != 0.0 ? 1.0 / den : 0.0;
      }
    }
  }

  int degree() const noexcept { return degree_; }
  std::size_t spans() const noexcept { return spans_; }
  std::size_t basis_count() const noexcept { return spans_ - static_cast<std::size_t>(degree_); }

  // B_{i,p}(x) into work[0 .. spans - p); work holds spans() values.
  void values(double x, int p, double* work) const { values_block(&x, 1, p, work); }

  // d/dx B_{i,degree}(x) into out[0 .. basis_count()).
  void derivative(double x, double* work, double* out) const { derivative_block(&x, 1, work, out); }

  // Block forms over `count` inputs; work[i * count + e] holds function i at
  // input e, so the inner loops run over e and vectorize.
  void values_block(const double* x, std::size_t count, int p, double* work) const {
    const double* t = t_.data();
    for (std::size_t i = 0; i < spans_; ++i) {
      double* w = work + i * count;
      const double lo = t[i];
      const double hi = t[i + 1];
      for (std::size_t e = 0; e < count; ++e) w[e] = (lo <= x[e] && x[e] < hi) ? 1.0 : 0.0;
    }
    for (int q = 1; q <= p; ++q) {
      const double* inv = inv_[static_cast<std::size_t>(q)].data();
      const std::size_t live = spans_ - static_cast<std::size_t>(q);
      for (std::size_t i = 0; i < live; ++i) {
        double* w = work + i * count;
        const double* w_next = w + count;
        const double ti = t[i];
        const double tr = t[i + static_cast<std::size_t>(q) + 1];
        const double il = inv[i];
        const double ir = inv[i + 1];
        for (std::size_t e = 0; e < count; ++e) w[e] = (x[e] - ti) * il * w[e] + (tr - x[e]) * ir * w_next[e];
      }
    }
  }

  // out[i * count + e] = d/dx B_{i,degree}(x[e]).
  void derivative_block(const double* x, std::size_t count, double* work, double* out) const {
    const std::size_t n = basis_count();
    if (degree_ == 0) {
      std::fill(out, out + n * count, 0.0);
      return;
    }
    values_block(x, count, degree_ - 1, work);
    const double* inv = inv_[static_cast<std::size_t>(degree_)].data();
    for (std::size_t i = 0; i < n; ++i) {
      const double* w = work + i * count;
      const double* w_next = w + count;
      double* o = out + i * count;
      for (std::size_t e = 0; e < count; ++e) o[e] = degree_ * (w[e] * inv[i] - w_next[e] * inv[i + 1]);
    }
  }

 private:
  std::vector<double> t_;
  int degree_;
  std::size_t spans_ = 0;
  std::vector<std::vector<double>> inv_;
};


std::vector<double> bspline_basis(double x, std::span<const double> knots, int degree) {
  const KnotTable table(knots, degree);
  std::vector<double> work(table.spans());
  table.values(x, degree, work.data());
  work.resize(table.basis_count());
  return work;
}

std::vector<double> bspline_basis_derivative(double x, std::span<const double> knots, int degree) {
  const KnotTable table(knots, degree);
  std::vector<double> work(table.spans());
  std::vector<double> d(table.basis_count());
  table.derivative(x, work.data(), d.data());
  return d;
}

BSplineBasisOp::BSplineBasisOp(std::vector<double> knots, int degree)
    : table_(std::make_shared<const KnotTable>(knots, degree)), basis_count_(table_->basis_count()) {}

namespace {
constexpr std::size_t kBlock = 64;
}  // namespace

core::Tensor BSplineBasisOp::forward(std::span<const core::Tensor* const> inputs) const {
  const core::Tensor& x = *inputs[0];
  core::Tensor out = core::Tensor::matrix(x.rows(), x.cols() * basis_count_);
  std::vector<double> work(table_->spans() * kBlock);
  for (std::size_t start = 0; start < x.size(); start += kBlock) {
    const std::size_t count = std::min(kBlock, x.size() - start);
    table_->values_block(x.data() + start, count, table_->degree(), work.data());
    for (std::size_t e = 0; e < count; ++e) {
      double* o = out.data() + (start + e) * basis_count_;
      for (std::size_t m = 0; m < basis_count_; ++m) o[m] = work[m * count + e];
    }
  }
  return out;
}

void BSplineBasisOp::backward(std::span<const core::Tensor* const> inputs, const core::Tensor&,
                              const core::Tensor& grad_output, std::span<core::Tensor* const> grads) const {
  if (!grads[0]) return;
  const core::Tensor& x = *inputs[0];
  std::vector<double> work(table_->spans() * kBlock);
  std::vector<double> d(basis_count_ * kBlock);
  double* dx = grads[0]->data();
  for (std::size_t start = 0; start < x.size(); start += kBlock) {
    const std::size_t count = std::min(kBlock, x.size() - start);
    table_->derivative_block(x.data() + start, count, work.data(), d.data());
    for (std::size_t e = 0; e < count; ++e) {
      const double* g = grad_output.data() + (start + e) * basis_count_;
      double acc = 0.0;
      for (std::size_t m = 0; m < basis_count_; ++m) acc += g[m] * d[m * count + e];
      dx[start + e] += acc;
    }
  }
}

std::string bspline_scale_name(std::size_t layer) { return "bspline." + std::to_string(layer) + ".scale"; }
std::string bspline_coef_name(std::size_t layer) { return "bspline." + std::to_string(layer) + ".coef"; }

void init_bspline_kan(const BSplineKANConfig& config, std::uint64_t seed, ModelParams& params) {
  config.validate();
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
    const std::size_t din = config.widths[l];
    const std::size_t dout = config.widths[l + 1];
    const double bound = 1.0 / std::sqrt(static_cast<double>(din));
    core::Tensor scale = core::Tensor::matrix(din, dout);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (double& v : scale.values()) v = uniform(rng);
    core::Tensor coef(core::Tensor::Shape{din, config.basis_count(), dout});
    std::normal_distribution<double> normal(0.0, 0.1 * bound);
    for (double& v : coef.values()) v = normal(rng);
    params.add(bspline_scale_name(l), std::move(scale));
    params.add(bspline_coef_name(l), std::move(coef));
  }
}

core::Var record_bspline_kan(core::Tape& tape, const BSplineKANConfig& config, std::span<const core::Var> vars,
                             core::Var t) {
  const std::size_t layers = config.widths.size() - 1;
  if (vars.size() != 2 * layers) throw ContractError("bspline-kan: expected " + std::to_string(2 * layers) + " tensors");
  const auto silu = activations::ActivationSpec::defaults(activations::ActivationKind::kSilu);
  const auto basis_op = std::make_shared<BSplineBasisOp>(config.knots(), config.degree);
  core::Var z = t;
  for (std::size_t l = 0; l < layers; ++l) {
    const core::Var residual = tape.matmul(activations::record(tape, silu, z, {}), vars[2 * l]);
    const core::Var spline = tape.matmul(tape.custom(basis_op, {z}), vars[2 * l + 1]);
    z = tape.add(residual, spline);
    if (!tape.value(z).all_finite()) throw NumericError("bspline-kan: non-finite value in layer " + std::to_string(l));
  }
  return z;
}

std::size_t bspline_kan_param_count(const BSplineKANConfig& config) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < config.widths.size(); ++l) {
    n += config.widths[l] * config.widths[l + 1] * (config.basis_count() + 1);
  }
  return n;
}

}  // namespace neaf::models
