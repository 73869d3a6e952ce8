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

#include "neaf/core/adam.hpp"

#include <cmath>

#include "neaf/core/error.hpp"

namespace neaf::core {

AdamState::AdamState(std::span<const Tensor> params) {
  first_moment.reserve(params.size());
  second_moment.reserve(params.size());
  for (const Tensor& p : params) {
    first_moment.push_back(Tensor::like(p));
    second_moment.push_back(Tensor::like(p));
  }
}

void adam_step(std::span<Tensor> params, std::span<const Tensor> grads, AdamState& state, double lr,
               std::span<const std::string> names) {
  auto label = [&](std::size_t i) { return i < names.size() ? names[i] : "#" + std::to_string(i); };
  if (params.size() != grads.size() || params.size() != state.first_moment.size() ||
      params.size() != state.second_moment.size()) {
    throw ContractError("adam_step: parameter, gradient and state counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].same_shape(grads[i]) || !params[i].same_shape(state.first_moment[i]) ||
        !params[i].same_shape(state.second_moment[i])) {
      throw ContractError("adam_step: shape mismatch for parameter " + label(i) + " " +
                          shape_string(params[i].shape()) + " vs gradient " + shape_string(grads[i].shape()));
    }
    if (!grads[i].all_finite()) throw NumericError("adam_step: non-finite gradient for parameter " + label(i));
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double b1 = state.beta1;
  const double b2 = state.beta2;
  const double correction1 = 1.0 - std::pow(b1, t);
  const double correction2 = 1.0 - std::pow(b2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i].data();
    const double* g = grads[i].data();
    double* m = state.first_moment[i].data();
    double* v = state.second_moment[i].data();
    for (std::size_t k = 0, n = params[i].size(); k < n; ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      p[k] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace neaf::core
