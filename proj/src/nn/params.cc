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

#include "mif/nn/params.h"

#include <cmath>
#include <stdexcept>

namespace mif::nn {

template <typename T>
Parameter<T>* ParamSet<T>::Add(std::string name, Tensor<T> init) {
  if (Find(name)) throw std::logic_error("duplicate parameter " + name);
  auto p = std::make_unique<Parameter<T>>();
  p->name = std::move(name);
  p->grad = Tensor<T>(init.channels(), init.height(), init.width());
  p->value = std::move(init);
  params_.push_back(std::move(p));
  return params_.back().get();
}

template <typename T>
Parameter<T>* ParamSet<T>::Find(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

template <typename T>
const Parameter<T>* ParamSet<T>::Find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

template <typename T>
std::size_t ParamSet<T>::ElementCount() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

template <typename T>
void ParamSet<T>::ZeroGrad() {
  for (auto& p : params_) p->grad.Fill(T(0));
}

template <typename T>
Tensor<T> FanInUniform(int out, int in, int taps, Rng& rng, T gain) {
  Tensor<T> t(out, in, taps);
  const double bound = gain / std::sqrt(static_cast<double>(in * taps));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (T& v : t.values()) v = static_cast<T>(dist(rng));
  return t;
}

template class ParamSet<float>;
template class ParamSet<double>;
template Tensor<float> FanInUniform<float>(int, int, int, Rng&, float);
template Tensor<double> FanInUniform<double>(int, int, int, Rng&, double);

}  // namespace mif::nn
