// Copyright 2026 The MIF Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mif/adam.h"

#include <cmath>

namespace mif {

template <typename T>
void AdamUpdate(std::span<T> params, std::span<const T> grads, std::span<T> m,
                std::span<T> v, long step, const AdamOptions& o) {
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(step));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    const double mi = o.beta1 * m[i] + (1.0 - o.beta1) * g;
    const double vi = o.beta2 * v[i] + (1.0 - o.beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    params[i] -= static_cast<T>(o.learning_rate * (mi / c1) /
                                (std::sqrt(vi / c2) + o.epsilon));
  }
}

template <typename T>
AdamOptimizer<T>::AdamOptimizer(nn::ParamSet<T>& params,
                                const AdamOptions& options)
    : params_(params), options_(options) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_.emplace_back(params[i].value.size(), T(0));
    v_.emplace_back(params[i].value.size(), T(0));
  }
}

template <typename T>
void AdamOptimizer<T>::Step() {
  ++step_;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    nn::Parameter<T>& p = params_[i];
    AdamUpdate<T>(p.value.values(), p.grad.values(), m_[i], v_[i], step_,
                  options_);
  }
}

template void AdamUpdate<float>(std::span<float>, std::span<const float>,
                                std::span<float>, std::span<float>, long,
                                const AdamOptions&);
template void AdamUpdate<double>(std::span<double>, std::span<const double>,
                                 std::span<double>, std::span<double>, long,
                                 const AdamOptions&);
template class AdamOptimizer<float>;
template class AdamOptimizer<double>;

}  // namespace mif
