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

#ifndef MIF_NN_PARAMS_H_
#define MIF_NN_PARAMS_H_

#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mif/nn/tensor.h"

namespace mif::nn {

template <typename T>
struct Parameter {
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;
};

// Ordered collection of named parameters. Element addresses are stable for
// the lifetime of the set, so layers may hold raw pointers into it.
template <typename T>
class ParamSet {
 public:
  ParamSet() = default;
  ParamSet(const ParamSet&) = delete;
  ParamSet& operator=(const ParamSet&) = delete;
  ParamSet(ParamSet&&) = default;
  ParamSet& operator=(ParamSet&&) = default;

  Parameter<T>* Add(std::string name, Tensor<T> init);

  Parameter<T>* Find(const std::string& name);
  const Parameter<T>* Find(const std::string& name) const;

  std::size_t size() const { return params_.size(); }
  std::size_t ElementCount() const;
  Parameter<T>& operator[](std::size_t i) { return *params_[i]; }
  const Parameter<T>& operator[](std::size_t i) const { return *params_[i]; }

  void ZeroGrad();

  // Copies values from `other` by name. Every parameter here must exist in
  // `other` with the same shape.
  template <typename U>
  void CopyValuesFrom(const ParamSet<U>& other);

 private:
  std::vector<std::unique_ptr<Parameter<T>>> params_;
};

using Rng = std::mt19937_64;

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
template <typename T>
Tensor<T> FanInUniform(int out, int in, int taps, Rng& rng, T gain = T(1));

template <typename T>
template <typename U>
void ParamSet<T>::CopyValuesFrom(const ParamSet<U>& other) {
  for (auto& p : params_) {
    const Parameter<U>* src = other.Find(p->name);
    if (!src || src->value.channels() != p->value.channels() ||
        src->value.height() != p->value.height() ||
        src->value.width() != p->value.width()) {
      throw std::runtime_error("parameter " + p->name +
                               " missing or mismatched in source set");
    }
    p->value = src->value.template Cast<T>();
  }
}

}  // namespace mif::nn

#endif  // MIF_NN_PARAMS_H_
