// Copyright 2026 The scatterscore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCATTERSCORE_NN_ADAM_HPP_
#define SCATTERSCORE_NN_ADAM_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "scatterscore/nn/tensor.hpp"

namespace scs::nn {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adam update with bias correction. `step` is the 1-based step index
/// (the caller increments its counter before the first call).
inline void adam_update(Tensor& param, const Tensor& grad, Tensor& m, Tensor& v,
                        std::int64_t step, const AdamConfig& cfg) {
  check_same_shape(param, grad, "adam_update param/grad");
  check_same_shape(param, m, "adam_update param/m");
  check_same_shape(param, v, "adam_update param/v");
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad.v[i];
    m.v[i] = cfg.beta1 * m.v[i] + (1.0 - cfg.beta1) * g;
    v.v[i] = cfg.beta2 * v.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m.v[i] / bc1;
    const double v_hat = v.v[i] / bc2;
    param.v[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

}  // namespace scs::nn

#endif  // SCATTERSCORE_NN_ADAM_HPP_
