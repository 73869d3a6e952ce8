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

#include "neaf/activations.hpp"

#include <algorithm>
#include <cmath>

#include "neaf/core/error.hpp"
#include "neaf/core/vecmath.hpp"

namespace neaf::activations {

namespace {

using namespace std::string_view_literals;

constexpr std::array<std::string_view, 0> kNone{};
constexpr std::array kA{"a"sv};
constexpr std::array kAB{"a"sv, "b"sv};
constexpr std::array kABCD{"a"sv, "b"sv, "c"sv, "d"sv};
constexpr std::array kOmega{"omega"sv};

struct KindInfo {
  ActivationKind kind;
  std::string_view name;
};

constexpr std::array<KindInfo, 16> kNames{{
    {ActivationKind::kGaborWavelet, "gabor_wavelet"},
    {ActivationKind::kQuadratic, "quadratic"},
    {ActivationKind::kMultiQuadratic, "multi_quadratic"},
    {ActivationKind::kExpSin, "expsin"},
    {ActivationKind::kSigmoid, "sigmoid"},
    {ActivationKind::kSoftplus, "softplus"},
    {ActivationKind::kTanh, "tanh"},
    {ActivationKind::kElu, "elu"},
    {ActivationKind::kSilu, "silu"},
    {ActivationKind::kPrelu, "prelu"},
    {ActivationKind::kRelu, "relu"},
    {ActivationKind::kGaussian, "gaussian"},
    {ActivationKind::kLaplacian, "laplacian"},
    {ActivationKind::kSuperGaussian, "super_gaussian"},
    {ActivationKind::kSine, "sine"},
    {ActivationKind::kIncodeSine, "incode_sine"},
}};

double& slot(ActivationParams& p, std::string_view name) {
  if (name == "a") return p.a;
  if (name == "b") return p.b;
  if (name == "c") return p.c;
  if (name == "d") return p.d;
  return p.omega;
}

inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow
inline double softplus_raw(double z) noexcept { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

template <bool kGrad>
inline double kernel(ActivationKind kind, const ActivationParams& p, double x, ActivationGrad* g) noexcept {
  switch (kind) {
    case ActivationKind::kGaborWavelet: {
      const double bx = p.b * x;
      const double envelope = std::exp(-bx * bx);
      const double c = std::cos(p.a * x);
      if constexpr (kGrad) {
        const double s = std::sin(p.a * x);
        g->dx = envelope * (-p.a * s - 2.0 * p.b * bx * c);
        g->dtheta[0] = -x * s * envelope;
        g->dtheta[1] = -2.0 * p.b * x * x * c * envelope;
      }
      return c * envelope;
    }
    case ActivationKind::kQuadratic: {
      const double ax = p.a * x;
      const double y = 1.0 / (1.0 + ax * ax);
      if constexpr (kGrad) g->dx = -2.0 * p.a * ax * y * y;
      return y;
    }
    case ActivationKind::kMultiQuadratic: {
      const double ax = p.a * x;
      const double y = 1.0 / std::sqrt(1.0 + ax * ax);
      if constexpr (kGrad) g->dx = -p.a * ax * y * y * y;
      return y;
    }
    case ActivationKind::kExpSin: {
      const double y = std::exp(-std::sin(p.a * x));
      if constexpr (kGrad) g->dx = -p.a * std::cos(p.a * x) * y;
      return y;
    }
    case ActivationKind::kSigmoid: {
      const double s = sigmoid(x);
      if constexpr (kGrad) g->dx = s * (1.0 - s);
      return s;
    }
    case ActivationKind::kSoftplus: {
      if constexpr (kGrad) g->dx = sigmoid(p.a * x);
      return softplus_raw(p.a * x) / p.a;
    }
    case ActivationKind::kTanh: {
      const double y = std::tanh(x);
      if constexpr (kGrad) g->dx = 1.0 - y * y;
      return y;
    }
    case ActivationKind::kElu: {
      if (x > 0.0) {
        if constexpr (kGrad) g->dx = 1.0;
        return x;
      }
      const double e = std::exp(x);
      if constexpr (kGrad) g->dx = p.a * e;
      return p.a * (e - 1.0);
    }
    case ActivationKind::kSilu: {
      const double s = sigmoid(x);
      if constexpr (kGrad) g->dx = s + x * s * (1.0 - s);
      return x * s;
    }
    case ActivationKind::kPrelu: {
      if (x > 0.0) {
        if constexpr (kGrad) {
          g->dx = 1.0;
          g->dtheta[0] = 0.0;
        }
        return x;
      }
      if constexpr (kGrad) {
        g->dx = x < 0.0 ? p.a : 0.0;
        g->dtheta[0] = x;
      }
      return p.a * x;
    }
    case ActivationKind::kRelu: {
      if constexpr (kGrad) g->dx = x > 0.0 ? 1.0 : 0.0;
      return x > 0.0 ? x : 0.0;
    }
    case ActivationKind::kGaussian: {
      const double y = std::exp(-x * x / (2.0 * p.a * p.a));
      if constexpr (kGrad) g->dx = -x / (p.a * p.a) * y;
      return y;
    }
    case ActivationKind::kLaplacian: {
      const double y = std::exp(-std::abs(x) / p.a);
      if constexpr (kGrad) g->dx = x > 0.0 ? -y / p.a : (x < 0.0 ? y / p.a : 0.0);
      return y;
    }
    case ActivationKind::kSuperGaussian: {
      const double gauss = std::exp(-x * x / (2.0 * p.a * p.a));
      const double y = std::pow(gauss, p.b);
      if constexpr (kGrad) g->dx = -p.b * x / (p.a * p.a) * y;
      return y;
    }
    case ActivationKind::kSine: {
      const double u = p.omega * x;
      if constexpr (kGrad) g->dx = p.omega * std::cos(u);
      return std::sin(u);
    }
    case ActivationKind::kIncodeSine: {
      const double bw = p.b * p.omega;
      const double u = bw * x + p.c;
      const double s = std::sin(u);
      if constexpr (kGrad) {
        const double ac = p.a * std::cos(u);
        g->dx = ac * bw;
        g->dtheta[0] = s;
        g->dtheta[1] = ac * p.omega * x;
        g->dtheta[2] = ac;
        g->dtheta[3] = 1.0;
      }
      return p.a * s + p.d;
    }
  }
  return 0.0;
}

// Logistic sigmoid of n values through the SIMD exp.
void silu_sigmoid(const double* x, double* out, std::size_t n) {
  std::vector<double> neg(n);
  for (std::size_t i = 0; i < n; ++i) neg[i] = -x[i];
  core::vecmath::exp(neg.data(), out, n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / (1.0 + out[i]);
}

class ActivationOp final : public core::CustomOp {
 public:
  ActivationOp(ActivationKind kind, ActivationParams hyper) : kind_(kind), hyper_(hyper) {}
  std::string_view name() const override { return to_string(kind_); }

  core::Tensor forward(std::span<const core::Tensor* const> inputs) const override {
    const ActivationParams p = params(inputs);
    const core::Tensor& x = *inputs[0];
    core::Tensor out = core::Tensor::like(x);
    const double* px = x.data();
    double* po = out.data();
    const std::size_t n = x.size();
    // The sine family dominates training cost, so it takes the SIMD path.
    if (kind_ == ActivationKind::kSine) {
      core::vecmath::sin(px, po, n, p.omega);
    } else if (kind_ == ActivationKind::kIncodeSine) {
      std::vector<double> u(n);
      const double bw = p.b * p.omega;
      for (std::size_t i = 0; i < n; ++i) u[i] = bw * px[i] + p.c;
      core::vecmath::sin(u.data(), po, n);
      for (std::size_t i = 0; i < n; ++i) po[i] = p.a * po[i] + p.d;
    } else if (kind_ == ActivationKind::kSilu) {
      silu_sigmoid(px, po, n);
      for (std::size_t i = 0; i < n; ++i) po[i] *= px[i];
    } else {
      for (std::size_t i = 0; i < n; ++i) po[i] = kernel<false>(kind_, p, px[i], nullptr);
    }
    return out;
  }

  void backward(std::span<const core::Tensor* const> inputs, const core::Tensor&, const core::Tensor& grad_output,
                std::span<core::Tensor* const> grads) const override {
    const ActivationParams p = params(inputs);
    const core::Tensor& x = *inputs[0];
    const std::size_t learnables = inputs.size() - 1;
    std::array<double, 4> acc{};
    ActivationGrad g;
    const double* px = x.data();
    const double* pg = grad_output.data();
    double* dx = grads[0] ? grads[0]->data() : nullptr;
    const std::size_t n = x.size();
    if (kind_ == ActivationKind::kSine) {
      if (!dx) return;
      std::vector<double> c(n);
      core::vecmath::cos(px, c.data(), n, p.omega);
      for (std::size_t i = 0; i < n; ++i) dx[i] += pg[i] * p.omega * c[i];
      return;
    }
    if (kind_ == ActivationKind::kSilu) {
      if (!dx) return;
      std::vector<double> sg(n);
      silu_sigmoid(px, sg.data(), n);
      for (std::size_t i = 0; i < n; ++i) dx[i] += pg[i] * (sg[i] + px[i] * sg[i] * (1.0 - sg[i]));
      return;
    }
    if (kind_ == ActivationKind::kIncodeSine) {
      std::vector<double> u(n), sn(n), cs(n);
      const double bw = p.b * p.omega;
      for (std::size_t i = 0; i < n; ++i) u[i] = bw * px[i] + p.c;
      core::vecmath::sin(u.data(), sn.data(), n);
      core::vecmath::cos(u.data(), cs.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        const double ac = p.a * cs[i];
        if (dx) dx[i] += pg[i] * ac * bw;
        acc[0] += pg[i] * sn[i];
        acc[1] += pg[i] * ac * p.omega * px[i];
        acc[2] += pg[i] * ac;
        acc[3] += pg[i];
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        kernel<true>(kind_, p, px[i], &g);
        if (dx) dx[i] += pg[i] * g.dx;
        for (std::size_t k = 0; k < learnables; ++k) acc[k] += pg[i] * g.dtheta[k];
      }
    }
    for (std::size_t k = 0; k < learnables; ++k) {
      if (grads[k + 1]) (*grads[k + 1])[0] += acc[k];
    }
  }

 private:
  ActivationParams params(std::span<const core::Tensor* const> inputs) const {
    ActivationParams p = hyper_;
    const auto names = learnable_names(kind_);
    for (std::size_t k = 0; k < names.size(); ++k) slot(p, names[k]) = inputs[k + 1]->item();
    return p;
  }

  ActivationKind kind_;
  ActivationParams hyper_;
};

}  // namespace

std::string_view to_string(ActivationKind kind) noexcept {
  for (const auto& info : kNames) {
    if (info.kind == kind) return info.name;
  }
  return "?";
}

ActivationKind activation_from_string(std::string_view name) {
  for (const auto& info : kNames) {
    if (info.name == name) return info.kind;
  }
  std::string valid;
  for (const auto& info : kNames) valid += (valid.empty() ? "" : ", ") + std::string(info.name);
  throw ContractError("unknown activation '" + std::string(name) + "' (valid: " + valid + ")");
}

std::span<const std::string_view> hyper_names(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::kQuadratic:
    case ActivationKind::kMultiQuadratic:
    case ActivationKind::kExpSin:
    case ActivationKind::kSoftplus:
    case ActivationKind::kElu:
    case ActivationKind::kGaussian:
    case ActivationKind::kLaplacian:
      return kA;
    case ActivationKind::kSuperGaussian:
      return kAB;
    case ActivationKind::kSine:
    case ActivationKind::kIncodeSine:
      return kOmega;
    default:
      return kNone;
  }
}

std::span<const std::string_view> learnable_names(ActivationKind kind) noexcept {
  switch (kind) {
    case ActivationKind::kGaborWavelet: return kAB;
    case ActivationKind::kPrelu: return kA;
    case ActivationKind::kIncodeSine: return kABCD;
    default: return kNone;
  }
}

bool is_sine_family(ActivationKind kind) noexcept {
  return kind == ActivationKind::kSine || kind == ActivationKind::kIncodeSine;
}

ActivationSpec ActivationSpec::defaults(ActivationKind kind) {
  ActivationSpec s;
  s.kind = kind;
  switch (kind) {
    case ActivationKind::kGaborWavelet:
      s.learnable = {{"a", 1.0}, {"b", 1.0}};
      break;
    case ActivationKind::kQuadratic:
    case ActivationKind::kMultiQuadratic:
    case ActivationKind::kExpSin:
    case ActivationKind::kSoftplus:
    case ActivationKind::kElu:
      s.hyper = {{"a", 1.0}};
      break;
    case ActivationKind::kPrelu:
      s.learnable = {{"a", 0.25}};
      break;
    case ActivationKind::kGaussian:
    case ActivationKind::kLaplacian:
      s.hyper = {{"a", 0.1}};
      break;
    case ActivationKind::kSuperGaussian:
      s.hyper = {{"a", 0.1}, {"b", 2.0}};
      break;
    case ActivationKind::kSine:
      s.hyper = {{"omega", 30.0}};
      break;
    case ActivationKind::kIncodeSine:
      s.hyper = {{"omega", 30.0}};
      s.learnable = {{"a", 1.0}, {"b", 1.0}, {"c", 0.0}, {"d", 0.0}};
      break;
    default:
      break;
  }
  return s;
}

void ActivationSpec::validate() const {
  const auto check = [&](const std::map<std::string, double>& given, std::span<const std::string_view> wanted,
                         const char* what) {
    if (given.size() != wanted.size()) {
      throw ContractError(std::string(to_string(kind)) + ": expected " + std::to_string(wanted.size()) + " " + what +
                          " parameter(s), got " + std::to_string(given.size()));
    }
    for (auto name : wanted) {
      auto it = given.find(std::string(name));
      if (it == given.end()) {
        throw ContractError(std::string(to_string(kind)) + ": missing " + what + " parameter '" + std::string(name) + "'");
      }
      if (!std::isfinite(it->second)) {
        throw ContractError(std::string(to_string(kind)) + ": parameter '" + std::string(name) + "' is not finite");
      }
    }
  };
  check(hyper, hyper_names(kind), "hyper");
  check(learnable, learnable_names(kind), "learnable");
  const ActivationParams p = resolve(*this);
  switch (kind) {
    case ActivationKind::kGaussian:
    case ActivationKind::kLaplacian:
    case ActivationKind::kSuperGaussian:
    case ActivationKind::kSoftplus:
      if (!(p.a > 0.0)) throw ContractError(std::string(to_string(kind)) + ": a must be positive");
      break;
    default:
      break;
  }
}

double ActivationSpec::omega() const {
  auto it = hyper.find("omega");
  return it == hyper.end() ? 1.0 : it->second;
}

ActivationParams resolve(const ActivationSpec& spec) {
  ActivationParams p;
  for (auto name : hyper_names(spec.kind)) {
    auto it = spec.hyper.find(std::string(name));
    if (it != spec.hyper.end()) slot(p, name) = it->second;
  }
  for (auto name : learnable_names(spec.kind)) {
    auto it = spec.learnable.find(std::string(name));
    if (it != spec.learnable.end()) slot(p, name) = it->second;
  }
  return p;
}

double evaluate(ActivationKind kind, const ActivationParams& p, double x) noexcept {
  return kernel<false>(kind, p, x, nullptr);
}

double evaluate(ActivationKind kind, const ActivationParams& p, double x, ActivationGrad& grad) noexcept {
  grad = ActivationGrad{};
  return kernel<true>(kind, p, x, &grad);
}

double apply(const ActivationSpec& spec, double x) {
  spec.validate();
  return evaluate(spec.kind, resolve(spec), x);
}

ActivationGrad apply_grad(const ActivationSpec& spec, double x) {
  spec.validate();
  ActivationGrad g;
  evaluate(spec.kind, resolve(spec), x, g);
  return g;
}

core::Var record(core::Tape& tape, const ActivationSpec& spec, core::Var x, std::span<const core::Var> learnable) {
  const auto names = learnable_names(spec.kind);
  if (learnable.size() != names.size()) {
    throw ContractError(std::string(to_string(spec.kind)) + ": expected " + std::to_string(names.size()) +
                        " learnable nodes, got " + std::to_string(learnable.size()));
  }
  ActivationParams hyper;
  for (auto name : hyper_names(spec.kind)) slot(hyper, name) = spec.hyper.at(std::string(name));
  std::vector<core::Var> inputs{x};
  inputs.insert(inputs.end(), learnable.begin(), learnable.end());
  return tape.custom(std::make_shared<ActivationOp>(spec.kind, hyper), std::move(inputs));
}

nlohmann::json to_json(const ActivationSpec& spec) {
  nlohmann::json j{{"kind", to_string(spec.kind)}};
  if (!spec.hyper.empty()) j["hyper"] = spec.hyper;
  if (!spec.learnable.empty()) j["learnable"] = spec.learnable;
  return j;
}

ActivationSpec activation_from_json(const nlohmann::json& doc) {
  if (doc.is_string()) return ActivationSpec::defaults(activation_from_string(doc.get<std::string>()));
  ActivationSpec spec = ActivationSpec::defaults(activation_from_string(doc.at("kind").get<std::string>()));
  auto apply_overrides = [&](const nlohmann::json& values, std::map<std::string, double>& target, const char* what) {
    for (const auto& [key, value] : values.items()) {
      auto it = target.find(key);
      if (it == target.end()) {
        throw ContractError(std::string(to_string(spec.kind)) + " has no " + what + " parameter '" + key + "'");
      }
      it->second = value.get<double>();
    }
  };
  if (doc.contains("hyper")) apply_overrides(doc["hyper"], spec.hyper, "hyper");
  if (doc.contains("learnable")) apply_overrides(doc["learnable"], spec.learnable, "learnable");
  spec.validate();
  return spec;
}

}  // namespace neaf::activations
